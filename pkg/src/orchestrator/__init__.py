"""Verification pipeline graph."""

from .workflow import create_workflow, run_verification

__all__ = ["create_workflow", "run_verification"]
