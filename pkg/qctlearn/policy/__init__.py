from qctlearn.policy.encoding import encode, encode_gates
from qctlearn.policy.network import PolicyModel, loss_gradient, mse_loss, softmax
from qctlearn.policy.optim import AdamState, adam_step
from qctlearn.policy.store import load, save
from qctlearn.policy.train import TrainHyper, TrainingReport, TrainingSample, train

__all__ = [
    "encode",
    "encode_gates",
    "PolicyModel",
    "loss_gradient",
    "mse_loss",
    "softmax",
    "AdamState",
    "adam_step",
    "load",
    "save",
    "TrainHyper",
    "TrainingReport",
    "TrainingSample",
    "train",
]
