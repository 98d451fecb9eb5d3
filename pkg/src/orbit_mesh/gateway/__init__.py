from orbit_mesh.gateway.service import GatewayConfig, GatewayService, UploadPackage
from orbit_mesh.gateway.errors import (
    BadRequest,
    GatewayError,
    MalformedPackage,
    UnknownStudy,
    UnknownTaskDefinition,
    UpstreamUnavailable,
)

__all__ = [
    "BadRequest",
    "GatewayConfig",
    "GatewayError",
    "GatewayService",
    "MalformedPackage",
    "UnknownStudy",
    "UnknownTaskDefinition",
    "UploadPackage",
    "UpstreamUnavailable",
]
