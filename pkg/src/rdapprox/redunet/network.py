"""AR-ReduNet training and the forward pass of a trained network."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
import torch

from rdapprox.config import TrainConfig
from rdapprox.errors import (
    AlphaSearchError,
    DimensionMismatchError,
    FeatureCollapseError,
    InsufficientSamplesError,
    ParameterError,
    RegularizationError,
    TrainingAborted,
)
from rdapprox.linalg.pca import PCAModel, pca_transform
from rdapprox.redunet import classifier
from rdapprox.redunet.layers import (
    FeatureMatrix,
    LayerParams,
    MembershipSet,
    as_tensor,
    build_layer,
    estimate_membership,
    init_features,
    layer_update,
)
from rdapprox.redunet.objective import objective, objective_alphas

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainedNetwork:
    layers: List[LayerParams]
    dim: int
    class_count: int
    ns_bases: List[torch.Tensor]
    config: TrainConfig
    objective_trace: List[float]
    pca: Optional[PCAModel] = None
    # Z^(L) of the training set; never persisted
    train_features: Optional[FeatureMatrix] = field(default=None, compare=False, repr=False)

    @property
    def layer_count(self) -> int:
        return len(self.layers)


def _check_labels(
    labels: Sequence[int] | np.ndarray, m: int, class_count: Optional[int]
) -> Tuple[np.ndarray, int]:
    raw = np.asarray(labels)
    if raw.ndim != 1 or raw.size != m:
        raise DimensionMismatchError(m, int(raw.size), "labels")
    if raw.size and not np.all(np.equal(np.mod(raw, 1), 0)):
        raise ParameterError("training labels must be integer class indices")
    label_array = raw.astype(np.int64)
    if label_array.size and int(label_array.min()) < 0:
        raise ParameterError("class indices must be non-negative")
    k = class_count if class_count is not None else int(label_array.max()) + 1
    counts = np.bincount(label_array, minlength=k)
    if counts.size > k:
        raise ParameterError(f"labels must lie in [0, {k})")
    short = np.flatnonzero(counts < 2)
    if short.size:
        raise ParameterError(
            f"class {int(short[0])} has {int(counts[short[0]])} samples; at least 2 are needed"
        )
    return label_array, k


def train(
    data: np.ndarray | torch.Tensor,
    labels: Sequence[int] | np.ndarray,
    config: TrainConfig,
    class_count: Optional[int] = None,
    pca: Optional[PCAModel] = None,
) -> TrainedNetwork:
    """Construct L layers from one-hot memberships and fit the nearest-subspace bases.

    ``data`` is n x m with samples as columns. The objective is recorded at every
    Z^(0) .. Z^(L); a numerical failure raises TrainingAborted with the partial trace.
    """
    x = as_tensor(data)
    if x.ndim != 2:
        raise ParameterError(f"data must be an n x m matrix, got shape {tuple(x.shape)}")
    n, m = x.shape
    if n < 2:
        raise ParameterError(f"feature dimension must be at least 2, got {n}")
    if m < 2:
        raise InsufficientSamplesError(m)
    label_array, k = _check_labels(labels, m, class_count)
    memberships = MembershipSet.one_hot(label_array, k)

    z = init_features(x)
    layers: List[LayerParams] = []
    trace: List[float] = []
    report_every = max(1, config.layer_count // 10)
    started = time.perf_counter()
    logger.info(
        f"Training {config.mode} network: n={n}, m={m}, k={k}, L={config.layer_count}, "
        f"eps^2={config.epsilon_sq}, eta={config.eta}"
    )
    for index in range(config.layer_count):
        try:
            layer = build_layer(z, memberships, index, config.epsilon_sq, config.mode, config.delta)
            trace.append(
                objective(z, memberships, config.epsilon_sq, (layer.alpha, layer.class_alphas))
            )
            z = layer_update(z, layer.expansion, layer.compressions, memberships, config.eta, index)
        except (AlphaSearchError, RegularizationError, FeatureCollapseError) as exc:
            raise TrainingAborted(index, trace, str(exc)) from exc
        layers.append(layer)
        logger.debug(
            f"layer {index}: alpha={layer.alpha:.6g}, "
            f"alpha_j={[round(a, 6) for a in layer.class_alphas]}, objective={trace[-1]:.6f}"
        )
        if (index + 1) % report_every == 0:
            logger.info(f"layer {index + 1}/{config.layer_count}: objective {trace[-1]:.6f}")

    try:
        final_alphas = objective_alphas(z, memberships, config.mode, config.delta)
    except AlphaSearchError as exc:
        raise TrainingAborted(config.layer_count, trace, str(exc)) from exc
    trace.append(objective(z, memberships, config.epsilon_sq, final_alphas))

    bases = classifier.fit_subspace_bases(
        z, label_array, k, config.ns_energy_threshold, config.ns_rank
    )
    logger.info(
        f"✓ Trained {len(layers)} layers in {time.perf_counter() - started:.1f}s; "
        f"objective {trace[0]:.6f} -> {trace[-1]:.6f}; "
        f"subspace ranks {[int(b.shape[1]) for b in bases]}"
    )
    return TrainedNetwork(
        layers=layers,
        dim=n,
        class_count=k,
        ns_bases=bases,
        config=config,
        objective_trace=trace,
        pca=pca,
        train_features=z,
    )


def prepare_input(network: TrainedNetwork, data: np.ndarray) -> np.ndarray:
    """Apply the bundled PCA when ``data`` still has the raw input dimension."""
    samples = np.asarray(data, dtype=np.float64)
    if network.pca is not None and samples.shape[0] == network.pca.input_dim:
        return pca_transform(network.pca, samples)
    return samples


def _input_features(network: TrainedNetwork, data: np.ndarray | torch.Tensor) -> FeatureMatrix:
    x = as_tensor(data)
    if x.ndim != 2 or x.shape[0] != network.dim:
        rows = int(x.shape[0]) if x.ndim >= 1 else 0
        raise DimensionMismatchError(network.dim, rows)
    return init_features(x)


@dataclass(frozen=True)
class LayerOutput:
    layer: LayerParams
    memberships: MembershipSet  # used by this layer's update
    features: FeatureMatrix  # Z after the update


def replay_layers(
    network: TrainedNetwork,
    data: np.ndarray | torch.Tensor,
    memberships: Optional[MembershipSet] = None,
) -> Iterator[LayerOutput]:
    """Run the stored layers one at a time.

    Without ``memberships`` each layer estimates them from its own C_j (test time); with
    the one-hot training memberships the replay reproduces the training trajectory.
    """
    z = _input_features(network, data)
    for layer in network.layers:
        weights = memberships
        if weights is None:
            weights = estimate_membership(z, layer.compressions, network.config.lambda_u)
        z = layer_update(
            z, layer.expansion, layer.compressions, weights, network.config.eta, layer.index
        )
        yield LayerOutput(layer=layer, memberships=weights, features=z)


def forward(network: TrainedNetwork, data: np.ndarray | torch.Tensor) -> FeatureMatrix:
    """Replay the stored layers with memberships estimated from the stored C_j."""
    z: Optional[FeatureMatrix] = None
    for output in replay_layers(network, data):
        z = output.features
    return _input_features(network, data) if z is None else z


@dataclass(frozen=True)
class DepthAccuracy:
    layers: int
    train_accuracy: float
    test_accuracy: float


def accuracy_by_depth(
    network: TrainedNetwork,
    train_data: np.ndarray,
    train_labels: Sequence[int] | np.ndarray,
    test_data: np.ndarray,
    test_labels: Sequence[int] | np.ndarray,
) -> List[DepthAccuracy]:
    """NS accuracy of every prefix Z^(0) .. Z^(L) of a trained network.

    Layer l depends only on the layers before it, so the first l stored layers are the
    network that training with L = l would have built; the subspace bases are refit on
    the training features of each prefix.
    """
    config = network.config
    train_truth = np.asarray(train_labels, dtype=np.int64)
    test_truth = np.asarray(test_labels, dtype=np.int64)
    k = network.class_count
    memberships = MembershipSet.one_hot(train_truth, k)

    def score(depth: int, z_train: FeatureMatrix, z_test: FeatureMatrix) -> DepthAccuracy:
        bases = classifier.fit_subspace_bases(
            z_train, train_truth, k, config.ns_energy_threshold, config.ns_rank
        )
        return DepthAccuracy(
            layers=depth,
            train_accuracy=classifier.accuracy_report(
                classifier.ns_classify(bases, z_train), train_truth, k
            ).overall,
            test_accuracy=classifier.accuracy_report(
                classifier.ns_classify(bases, z_test), test_truth, k
            ).overall,
        )

    rows = [score(0, _input_features(network, train_data), _input_features(network, test_data))]
    trained = replay_layers(network, train_data, memberships)
    tested = replay_layers(network, test_data)
    for depth, (train_out, test_out) in enumerate(zip(trained, tested), start=1):
        rows.append(score(depth, train_out.features, test_out.features))
    return rows


def ns_classify(network: TrainedNetwork, features: FeatureMatrix) -> np.ndarray:
    return classifier.ns_classify(network.ns_bases, features)
