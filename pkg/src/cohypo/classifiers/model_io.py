"""Self-describing binary model files (variant tag + hyperparameters + payload)."""

import numpy as np

from cohypo import binio
from cohypo.classifiers.forest import DecisionTree, RandomForestModel
from cohypo.classifiers.knn import KnnModel
from cohypo.classifiers.svm import LinearSvmModel
from cohypo.classifiers.thresholds import ThresholdModel
from cohypo.errors import InputFormatError

_MAGIC = b"MDL1"


def save_model(model, path):
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        if isinstance(model, LinearSvmModel):
            binio.write_str(fh, "svm")
            binio.write_json_blob(fh, model.config)
            binio.write_array(fh, model.weights, "<f8")
            binio.write_f64(fh, model.bias)
        elif isinstance(model, RandomForestModel):
            binio.write_str(fh, "rf")
            binio.write_json_blob(fh, model.config)
            binio.write_u32(fh, len(model.trees))
            for tree in model.trees:
                binio.write_array(fh, tree.feature, "<i4")
                binio.write_array(fh, tree.threshold, "<f8")
                binio.write_array(fh, tree.left, "<i4")
                binio.write_array(fh, tree.right, "<i4")
                binio.write_array(fh, tree.label, "<i4")
        elif isinstance(model, KnnModel):
            binio.write_str(fh, "knn")
            binio.write_json_blob(fh, dict(model.config, k=model.k))
            binio.write_u32(fh, model.train_X.shape[1] if model.train_X.ndim == 2 else 0)
            binio.write_array(fh, model.train_X, "<f8")
            binio.write_array(fh, model.train_y, "<i8")
        elif isinstance(model, ThresholdModel):
            binio.write_str(fh, model.kind)
            binio.write_json_blob(fh, model.config)
            binio.write_f64(fh, model.threshold)
        else:
            raise TypeError(f"cannot serialize model of type {type(model).__name__}")


def load_model(path):
    with open(path, "rb") as fh:
        binio.expect_magic(fh, _MAGIC, path=path)
        variant = binio.read_str(fh)
        config = None
        if variant == "svm":
            config = binio.read_json_blob(fh)
            weights = binio.read_array(fh, "<f8")
            bias = binio.read_f64(fh)
            return LinearSvmModel(weights, bias, config)
        if variant == "rf":
            config = binio.read_json_blob(fh)
            n_trees = binio.read_u32(fh)
            trees = []
            for _ in range(n_trees):
                feature = binio.read_array(fh, "<i4")
                threshold = binio.read_array(fh, "<f8")
                left = binio.read_array(fh, "<i4")
                right = binio.read_array(fh, "<i4")
                label = binio.read_array(fh, "<i4")
                trees.append(DecisionTree(feature, threshold, left, right, label))
            return RandomForestModel(trees, [], [], config)
        if variant == "knn":
            config = binio.read_json_blob(fh)
            dim = binio.read_u32(fh)
            X = binio.read_array(fh, "<f8")
            y = binio.read_array(fh, "<i8")
            X = X.reshape(y.size, dim) if dim else X.reshape(y.size, -1)
            return KnnModel(X, y, int(config["k"]), config)
        if variant in ("cosinep", "linp"):
            config = binio.read_json_blob(fh)
            threshold = binio.read_f64(fh)
            return ThresholdModel(variant, threshold, config)
    raise InputFormatError(f"unknown model variant {variant!r}", path=path)
