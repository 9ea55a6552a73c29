"""Gallery of unital positive linear maps."""

from .positive_maps import (
    Compression,
    KrausMixture,
    MapSpec,
    NormalizedTrace,
    Pinching,
    block_average,
    map_from_json,
    map_gallery,
    random_map,
    validate,
)

__all__ = [
    "Compression",
    "KrausMixture",
    "MapSpec",
    "NormalizedTrace",
    "Pinching",
    "block_average",
    "map_from_json",
    "map_gallery",
    "random_map",
    "validate",
]
