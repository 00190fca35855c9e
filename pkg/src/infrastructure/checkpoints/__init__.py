"""Model checkpoint persistence."""

from .checkpoint_store import CHECKPOINT_FORMAT, CHECKPOINT_VERSION, CheckpointError, CheckpointStore, ModelCheckpoint

__all__ = ["CHECKPOINT_FORMAT", "CHECKPOINT_VERSION", "CheckpointError", "CheckpointStore", "ModelCheckpoint"]
