from .app import create_app
from .state import ServiceState

__all__ = ["create_app", "ServiceState"]
