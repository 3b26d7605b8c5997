"""Q-network model: parameters, training loop and checkpoints."""

from alclearn.models.checkpoint import load_checkpoint, save_checkpoint
from alclearn.models.network import QNetworkParams, forward, forward_batch, init_network, parameter_count
from alclearn.models.training import ReplayBuffer, TrainingReport, train

__all__ = [
    "QNetworkParams",
    "ReplayBuffer",
    "TrainingReport",
    "forward",
    "forward_batch",
    "init_network",
    "load_checkpoint",
    "parameter_count",
    "save_checkpoint",
    "train",
]
