"""From-scratch neural network stack for node prediction on hybrid graphs."""

from . import autodiff
from .layers import GraphTensors, build_graph_tensors
from .losses import bce_with_logits, mse, one_hot
from .models import GNN, LPModel, MODEL_NAMES, ModelSpec, build_model
from .train import (
    Adam,
    TrainConfig,
    TrialResult,
    cosine_lr,
    evaluate,
    load_model,
    random_guess,
    run_experiment,
    save_model,
    train_single,
)

__all__ = [
    "Adam",
    "GNN",
    "GraphTensors",
    "LPModel",
    "MODEL_NAMES",
    "ModelSpec",
    "TrainConfig",
    "TrialResult",
    "autodiff",
    "bce_with_logits",
    "build_graph_tensors",
    "build_model",
    "cosine_lr",
    "evaluate",
    "load_model",
    "mse",
    "one_hot",
    "random_guess",
    "run_experiment",
    "save_model",
    "train_single",
]
