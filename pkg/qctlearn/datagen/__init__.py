from qctlearn.datagen.circuits import (
    gen_training_circuits,
    load_qasm_corpus,
    slice_layers,
    slice_realistic_corpus,
    split_corpus,
)
from qctlearn.datagen.farm import load_dataset, run_label_farm, write_dataset
from qctlearn.datagen.labels import label_base, label_circuit, label_mcts, label_sahs, normalize_weights

__all__ = [
    "gen_training_circuits",
    "load_qasm_corpus",
    "slice_layers",
    "slice_realistic_corpus",
    "split_corpus",
    "load_dataset",
    "run_label_farm",
    "write_dataset",
    "label_base",
    "label_circuit",
    "label_mcts",
    "label_sahs",
    "normalize_weights",
]
