from __future__ import annotations


class GatewayError(Exception):
    pass


class BadRequest(GatewayError):
    pass


class UpstreamUnavailable(GatewayError):
    """Dispatcher unreachable after retries; surfaces as 503."""


class UnknownStudy(GatewayError):
    pass


class UnknownTaskDefinition(GatewayError):
    pass


class MalformedPackage(GatewayError):
    pass
