"""orbit-mesh: dispatcher, gateway, storage, worker SDK, study orchestration, and a reference linguistic pipeline."""

__version__ = "0.1.0"
