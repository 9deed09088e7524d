"""REST service: configuration, assembly, and the FastAPI application."""

from .app import create_app
from .config import ServiceConfig, load_config
from .service import Workbench, parse_document_line, run_local

__all__ = ["ServiceConfig", "Workbench", "create_app", "load_config", "parse_document_line", "run_local"]
