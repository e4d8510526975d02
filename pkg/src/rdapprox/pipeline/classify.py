"""Network commands: train, eval and the adaptive-vs-fixed comparison."""

from __future__ import annotations

import logging
import time
from dataclasses import replace
from pathlib import Path
from typing import Iterator, List, Optional, Tuple

import numpy as np

from rdapprox.config import RunConfig, TrainConfig
from rdapprox.constants import MODE_ADAPTIVE, MODE_FIXED
from rdapprox.errors import ParameterError, TrainingAborted
from rdapprox.io.dataset import Dataset
from rdapprox.io.models import load_network, save_network
from rdapprox.io.serialize import write_json, write_table
from rdapprox.linalg.pca import PCAModel, fit_pca, pca_transform
from rdapprox.pipeline.report import finish_run, json_number, start_run
from rdapprox.pipeline.sources import load_eval_set, load_train_test
from rdapprox.redunet.classifier import AccuracyReport, accuracy_report, cosine_similarity_report
from rdapprox.redunet.network import (
    TrainedNetwork,
    accuracy_by_depth,
    forward,
    ns_classify,
    prepare_input,
    train,
)

logger = logging.getLogger("rdapprox")

COMPARE_COLUMNS = [
    "epsilon_sq",
    "mode",
    "train_accuracy",
    "test_accuracy",
    "initial_objective",
    "final_objective",
]
DEPTH_COLUMNS = ["layers", "mode", "train_accuracy", "test_accuracy"]
PCA_COLUMNS = ["ratio", "dim", "mode", "train_accuracy", "test_accuracy"]


def _reduce(
    config: RunConfig, train_set: Dataset, test_set: Optional[Dataset]
) -> Tuple[np.ndarray, Optional[np.ndarray], Optional[PCAModel]]:
    if not config.pca.enabled:
        test_samples = test_set.samples if test_set is not None else None
        return train_set.samples, test_samples, None
    model = fit_pca(
        train_set.samples,
        target_dim=config.pca.dim,
        target_ratio=config.pca.ratio,
        centered=config.pca.centered,
    )
    test_samples = pca_transform(model, test_set.samples) if test_set is not None else None
    return pca_transform(model, train_set.samples), test_samples, model


def _evaluate(
    network: TrainedNetwork, samples: np.ndarray, labels: np.ndarray
) -> AccuracyReport:
    if samples.shape[1] == 0:
        raise ParameterError("empty test set")
    predicted = ns_classify(network, forward(network, samples))
    return accuracy_report(predicted, labels, network.class_count)


def _train_accuracy(network: TrainedNetwork, labels: np.ndarray) -> AccuracyReport:
    assert network.train_features is not None
    return accuracy_report(
        ns_classify(network, network.train_features), labels, network.class_count
    )


def _format_accuracy(report: AccuracyReport) -> str:
    per_class = " ".join(f"{t}:{acc:.4f}" for t, acc in enumerate(report.per_class))
    return f"accuracy={report.overall:.4f} ({report.sample_count} samples) per-class {per_class}"


def cmd_train(config: RunConfig) -> int:
    paths = start_run("train", config)
    train_set, test_set = load_train_test(config, need_test=False)
    labels = train_set.require_labels()

    logger.info("Stage 1/3: Preprocessing")
    train_samples, test_samples, pca = _reduce(config, train_set, test_set)

    logger.info(f"Stage 2/3: Training {config.train.layer_count} layers ({config.train.mode})")
    started = time.perf_counter()
    try:
        network = train(train_samples, labels, config.train, train_set.class_count, pca)
    except TrainingAborted as exc:
        write_table(
            paths.objective_csv,
            ["layer", "objective"],
            [[i, v] for i, v in enumerate(exc.objective_trace)],
        )
        logger.error(f"✗ Partial objective trace written to {paths.objective_csv}")
        raise
    logger.info(f"✓ Training completed in {time.perf_counter() - started:.1f}s")

    logger.info("Stage 3/3: Writing model and reports")
    digest = save_network(paths.network_model, network)
    write_table(
        paths.objective_csv,
        ["layer", "objective"],
        [[i, v] for i, v in enumerate(network.objective_trace)],
    )
    train_report = _train_accuracy(network, labels)
    print(f"train {_format_accuracy(train_report)}")
    summary = {
        "sha256": digest,
        "layers": network.layer_count,
        "dim": network.dim,
        "class_count": network.class_count,
        "initial_objective": network.objective_trace[0],
        "final_objective": network.objective_trace[-1],
        "train_accuracy": train_report.overall,
    }
    if test_set is not None and test_samples is not None:
        test_report = _evaluate(network, test_samples, test_set.require_labels())
        print(f"test {_format_accuracy(test_report)}")
        summary["test_accuracy"] = test_report.overall
    logger.info(f"Model sha256 {digest}")
    finish_run(
        "train",
        config,
        paths,
        {"model": paths.network_model, "objective_trace": paths.objective_csv},
        summary,
    )
    return 0


def cmd_eval(config: RunConfig) -> int:
    if not config.inputs.model:
        raise ParameterError("eval needs --model")
    paths = start_run("eval", config)
    network = load_network(Path(config.inputs.model))
    dataset = load_eval_set(config)
    if dataset.sample_count == 0:
        raise ParameterError("empty test set")
    labels = dataset.require_labels()

    started = time.perf_counter()
    samples = prepare_input(network, dataset.samples)
    features = forward(network, samples)
    report = accuracy_report(ns_classify(network, features), labels, network.class_count)
    elapsed = time.perf_counter() - started
    logger.info(f"✓ Forward pass over {network.layer_count} layers in {elapsed:.1f}s")
    print(_format_accuracy(report))

    payload = {
        "overall": report.overall,
        "per_class": [json_number(v) for v in report.per_class],
        "sample_count": report.sample_count,
        "model": config.inputs.model,
    }
    write_json(paths.accuracy_json, payload)
    outputs = {"accuracy": paths.accuracy_json}
    if config.inputs.similarity:
        similarity = cosine_similarity_report(features, labels, network.class_count)
        k = network.class_count
        rows: List[List[object]] = [
            [a, b, float(similarity.class_pair_means[a, b])] for a in range(k) for b in range(k)
        ]
        write_table(paths.similarity_csv, ["class_a", "class_b", "mean_abs_similarity"], rows)
        outputs["similarity"] = paths.similarity_csv
    finish_run("eval", config, paths, outputs, payload)
    return 0


def _both_modes(
    settings: TrainConfig,
    train_samples: np.ndarray,
    train_labels: np.ndarray,
    test_samples: np.ndarray,
    test_labels: np.ndarray,
    class_count: int,
    pca: Optional[PCAModel],
) -> Iterator[Tuple[str, TrainedNetwork, AccuracyReport, AccuracyReport]]:
    for mode in (MODE_ADAPTIVE, MODE_FIXED):
        network = train(train_samples, train_labels, replace(settings, mode=mode), class_count, pca)
        yield (
            mode,
            network,
            _train_accuracy(network, train_labels),
            _evaluate(network, test_samples, test_labels),
        )


def cmd_compare(config: RunConfig) -> int:
    paths = start_run("compare", config)
    train_set, test_set = load_train_test(config, need_test=True)
    assert test_set is not None
    train_labels = train_set.require_labels()
    test_labels = test_set.require_labels()
    train_samples, test_samples, pca = _reduce(config, train_set, test_set)
    assert test_samples is not None
    k = train_set.class_count

    sweep = config.inputs.eps2_sweep
    ratios = config.inputs.pca_ratio_sweep
    total = len(sweep) + int(config.inputs.depth_sweep) + len(ratios)
    stage = 0
    outputs = {"compare": paths.compare_csv}

    rows: List[List[object]] = []
    for epsilon_sq in sweep:
        stage += 1
        logger.info(f"Stage {stage}/{total}: eps^2={epsilon_sq}")
        settings = replace(config.train, epsilon_sq=epsilon_sq)
        for mode, network, train_report, test_report in _both_modes(
            settings, train_samples, train_labels, test_samples, test_labels, k, pca
        ):
            rows.append(
                [
                    epsilon_sq,
                    mode,
                    train_report.overall,
                    test_report.overall,
                    network.objective_trace[0],
                    network.objective_trace[-1],
                ]
            )
            print(
                f"eps^2={epsilon_sq} mode={mode} train={train_report.overall:.4f} "
                f"test={test_report.overall:.4f}"
            )
    write_table(paths.compare_csv, COMPARE_COLUMNS, rows)

    if config.inputs.depth_sweep:
        stage += 1
        logger.info(f"Stage {stage}/{total}: accuracy per layer, L={config.train.layer_count}")
        depth_rows: List[List[object]] = []
        for mode, network, _, _ in _both_modes(
            config.train, train_samples, train_labels, test_samples, test_labels, k, pca
        ):
            for point in accuracy_by_depth(
                network, train_samples, train_labels, test_samples, test_labels
            ):
                depth_rows.append([point.layers, mode, point.train_accuracy, point.test_accuracy])
        write_table(paths.compare_depth_csv, DEPTH_COLUMNS, depth_rows)
        outputs["depth"] = paths.compare_depth_csv

    if ratios:
        pca_rows: List[List[object]] = []
        for ratio in ratios:
            stage += 1
            model = fit_pca(train_set.samples, target_ratio=ratio, centered=config.pca.centered)
            logger.info(f"Stage {stage}/{total}: P={ratio} keeps {model.output_dim} dims")
            reduced_train = pca_transform(model, train_set.samples)
            reduced_test = pca_transform(model, test_set.samples)
            for mode, _, train_report, test_report in _both_modes(
                config.train, reduced_train, train_labels, reduced_test, test_labels, k, model
            ):
                pca_rows.append(
                    [ratio, model.output_dim, mode, train_report.overall, test_report.overall]
                )
                print(
                    f"P={ratio} n={model.output_dim} mode={mode} "
                    f"test={test_report.overall:.4f}"
                )
        write_table(paths.compare_pca_csv, PCA_COLUMNS, pca_rows)
        outputs["pca"] = paths.compare_pca_csv

    finish_run("compare", config, paths, outputs, {"rows": len(rows)})
    return 0
