"""
Four-layer graph convolutional embedder.

Layer 1  fully connected map of node features plus aggregate edge power
Layer 2  two-layer ReLU MLP followed by self-inclusive mean aggregation
Layer 3  LSTM over each node's vote sequence; final hidden state is
         concatenated to the layer-2 output
Layer 4  multi-head graph attention over the vote edges; heads are
         concatenated and projected to the embedding width

A linear decoder maps embeddings back to the node features for the MSE
reconstruction loss. All layers are built from numcore primitives.
"""

from dataclasses import dataclass, field

import numpy as np

from sybilgraph.embedder.config import TrainConfig
from sybilgraph.embedder.features import SEQUENCE_FEATURES, FeatureSet
from sybilgraph.numcore import (
    Tensor,
    add,
    concat,
    constant,
    glorot_uniform,
    leaky_relu,
    matmul,
    multiply,
    parameter,
    relu,
    sigmoid,
    slice,
    softmax,
    tanh,
    transpose,
)

ATTENTION_SLOPE = 0.2
MASKED_SCORE = -1e9


@dataclass
class ModelParams:
    """
    Named parameter blocks of the embedder.

    Parameters
    ----------
    blocks : dict[str, ndarray]
        Parameter arrays keyed by name; insertion order is the canonical order.
    heads : int
        Number of attention heads.
    """

    blocks: dict[str, np.ndarray] = field(default_factory=dict)
    heads: int = 1

    def names(self) -> list[str]:
        return list(self.blocks)

    def arrays(self) -> list[np.ndarray]:
        return list(self.blocks.values())

    def with_arrays(self, arrays: list[np.ndarray]) -> "ModelParams":
        return ModelParams(blocks=dict(zip(self.blocks, arrays)), heads=self.heads)

    def group(self, layer: str) -> dict[str, np.ndarray]:
        """Blocks of one layer: ``fc``, ``mlp``, ``lstm``, ``gat`` or ``dec``."""
        return {k: v for k, v in self.blocks.items() if k.startswith(f"{layer}_")}

    def as_tensors(self) -> dict[str, Tensor]:
        return {name: parameter(array, name=name) for name, array in self.blocks.items()}

    @property
    def embedding_dim(self) -> int:
        return self.blocks["gat_out_w"].shape[1]


def _layout(config: TrainConfig, feature_count: int) -> dict[str, tuple[int, int]]:
    h, d = config.hidden_dim, config.embedding_dim
    shapes = {
        "fc_w": (feature_count + 1, h),
        "fc_b": (1, h),
        "mlp_w1": (h, h),
        "mlp_b1": (1, h),
        "mlp_w2": (h, h),
        "mlp_b2": (1, h),
        "lstm_w": (SEQUENCE_FEATURES + h, 4 * h),
        "lstm_b": (1, 4 * h),
    }
    for head in range(config.heads):
        shapes[f"gat_w_{head}"] = (2 * h, config.head_dim)
        shapes[f"gat_src_{head}"] = (config.head_dim, 1)
        shapes[f"gat_dst_{head}"] = (config.head_dim, 1)
    shapes["gat_out_w"] = (config.heads * config.head_dim, d)
    shapes["gat_out_b"] = (1, d)
    shapes["dec_w"] = (d, feature_count)
    shapes["dec_b"] = (1, feature_count)
    return shapes


def init_params(config: TrainConfig, feature_count: int, seed: int | None = None) -> ModelParams:
    """
    Glorot-uniform weights and zero biases (LSTM forget-gate bias 1).

    Parameters
    ----------
    config : TrainConfig
        Layer widths and head count.
    feature_count : int
        Number of engineered node features.
    seed : int | None, optional
        Initialization seed; defaults to ``config.init_seed``, then
        ``config.seed``.

    Returns
    -------
    ModelParams
        Freshly initialized parameters.
    """
    if seed is None:
        seed = config.seed if config.init_seed is None else config.init_seed
    rng = np.random.default_rng(seed)
    blocks: dict[str, np.ndarray] = {}
    for name, (rows, cols) in _layout(config, feature_count).items():
        if rows == 1:
            blocks[name] = np.zeros((rows, cols))
        else:
            blocks[name] = glorot_uniform(rows, cols, rng)
    h = config.hidden_dim
    blocks["lstm_b"][0, h : 2 * h] = 1.0
    return ModelParams(blocks=blocks, heads=config.heads)


def zero_params(config: TrainConfig, feature_count: int) -> ModelParams:
    """All-zero parameters with the layout of :func:`init_params`."""
    blocks = {name: np.zeros(shape) for name, shape in _layout(config, feature_count).items()}
    return ModelParams(blocks=blocks, heads=config.heads)


@dataclass
class GraphOperators:
    """
    Structure-only constants shared by every forward pass on one graph.

    Both matrices are dense n x n float64 arrays, so memory grows with the
    square of the node count (about 16 * n**2 bytes each; 1.6 GB at 10,000
    nodes). Graphs much larger than that need sparse operators.

    Parameters
    ----------
    mean_aggregator : ndarray
        n x n row-stochastic matrix averaging each node with its neighbors,
        counting parallel edges and one self-loop.
    attention_bias : ndarray
        n x n additive attention mask: ``log(multiplicity)`` on edges and the
        self-loop, a large negative value elsewhere.
    """

    mean_aggregator: np.ndarray
    attention_bias: np.ndarray

    @classmethod
    def build(cls, features: FeatureSet) -> "GraphOperators":
        n = features.node_count
        multiplicity = np.eye(n)
        if len(features.edge_index):
            sources, targets = features.edge_index[:, 0], features.edge_index[:, 1]
            np.add.at(multiplicity, (sources, targets), 1.0)
            np.add.at(multiplicity, (targets, sources), 1.0)
        aggregator = multiplicity / multiplicity.sum(axis=1, keepdims=True)
        bias = np.full((n, n), MASKED_SCORE)
        linked = multiplicity > 0
        bias[linked] = np.log(multiplicity[linked])
        return cls(mean_aggregator=aggregator, attention_bias=bias)


@dataclass
class ForwardOutput:
    """
    Result of :func:`forward`.

    Parameters
    ----------
    embeddings : Tensor
        n x d raw (uncentered) embeddings.
    reconstruction : Tensor
        n x f decoded node features.
    attention : list[ndarray]
        Per-head n x n attention coefficients (row i = target node i).
    parameters : dict[str, Tensor]
        Parameter tensors used in the pass, for :func:`backward`.
    """

    embeddings: Tensor
    reconstruction: Tensor
    attention: list[np.ndarray]
    parameters: dict[str, Tensor]


def _affine(x: Tensor, weight: Tensor, bias: Tensor) -> Tensor:
    return add(matmul(x, weight), bias)


def _lstm(params: dict[str, Tensor], sequences: np.ndarray, hidden: int) -> Tensor:
    n, steps, _ = sequences.shape
    h = constant(np.zeros((n, hidden)))
    c = constant(np.zeros((n, hidden)))
    for step in range(steps):
        z = _affine(concat([constant(sequences[:, step, :]), h], axis=1), params["lstm_w"], params["lstm_b"])
        input_gate = sigmoid(slice(z, 0, hidden))
        forget_gate = sigmoid(slice(z, hidden, 2 * hidden))
        output_gate = sigmoid(slice(z, 2 * hidden, 3 * hidden))
        candidate = tanh(slice(z, 3 * hidden, 4 * hidden))
        c = add(multiply(forget_gate, c), multiply(input_gate, candidate))
        h = multiply(output_gate, tanh(c))
    return h


def _attention_head(
    x: Tensor, weight: Tensor, source: Tensor, target: Tensor, bias: Tensor
) -> tuple[Tensor, Tensor]:
    projected = matmul(x, weight)
    scores = add(matmul(projected, target), transpose(matmul(projected, source)))
    coefficients = softmax(add(leaky_relu(scores, ATTENTION_SLOPE), bias))
    return matmul(coefficients, projected), coefficients


def forward(
    params: ModelParams,
    features: FeatureSet,
    operators: GraphOperators | None = None,
    overrides: dict[str, Tensor] | None = None,
) -> ForwardOutput:
    """
    Run the four layers and the decoder over every node.

    Parameters
    ----------
    params : ModelParams
        Parameter values.
    features : FeatureSet
        Engineered inputs of one graph.
    operators : GraphOperators | None, optional
        Precomputed aggregation and attention constants; built when omitted.
    overrides : dict[str, Tensor] | None, optional
        Tensors to use in place of the named blocks (used by gradient checks).

    Returns
    -------
    ForwardOutput
        Raw embeddings, reconstruction, attention coefficients, and the
        parameter tensors that were used.
    """
    operators = operators or GraphOperators.build(features)
    tensors = params.as_tensors()
    tensors.update(overrides or {})
    hidden = params.blocks["mlp_w1"].shape[0]

    inputs = constant(np.concatenate([features.node_features, features.power_aggregate], axis=1))
    layer1 = _affine(inputs, tensors["fc_w"], tensors["fc_b"])

    mlp = relu(_affine(layer1, tensors["mlp_w1"], tensors["mlp_b1"]))
    mlp = relu(_affine(mlp, tensors["mlp_w2"], tensors["mlp_b2"]))
    layer2 = matmul(constant(operators.mean_aggregator), mlp)

    layer3 = concat([layer2, _lstm(tensors, features.temporal_sequences, hidden)], axis=1)

    bias = constant(operators.attention_bias)
    head_outputs, attention = [], []
    for head in range(params.heads):
        output, coefficients = _attention_head(
            layer3,
            tensors[f"gat_w_{head}"],
            tensors[f"gat_src_{head}"],
            tensors[f"gat_dst_{head}"],
            bias,
        )
        head_outputs.append(output)
        attention.append(coefficients.data)
    embeddings = _affine(concat(head_outputs, axis=1), tensors["gat_out_w"], tensors["gat_out_b"])

    reconstruction = _affine(embeddings, tensors["dec_w"], tensors["dec_b"])
    return ForwardOutput(
        embeddings=embeddings,
        reconstruction=reconstruction,
        attention=attention,
        parameters=tensors,
    )
