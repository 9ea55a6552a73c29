"""JSON and text report emission."""

from .report import (
    certificate_dict,
    check_result_dict,
    envelope,
    render,
    suite_report_dict,
    to_json_text,
    write_report,
)

__all__ = [
    "certificate_dict",
    "check_result_dict",
    "envelope",
    "render",
    "suite_report_dict",
    "to_json_text",
    "write_report",
]
