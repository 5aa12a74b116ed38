from .common import TrainerConfig
from .data import Dataset, load_dataset, synth_imbalanced
from .kmeans import kmeans_bound_estimates, kmeans_signal, train_kmeans
from .logreg import gradient_loss_signal, train_logreg

__all__ = [
    "Dataset",
    "TrainerConfig",
    "gradient_loss_signal",
    "kmeans_bound_estimates",
    "kmeans_signal",
    "load_dataset",
    "synth_imbalanced",
    "train_kmeans",
    "train_logreg",
]
