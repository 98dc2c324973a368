from typing import Any, Dict, List, Literal, Optional, Tuple
from pydantic import BaseModel, Field, field_validator, model_validator


class TopologySpec(BaseModel):
    """
    On-disk architecture graph:
    ``{"name": str, "num_nodes": int, "edges": [[u, v], ...]}``.
    """
    name: str
    num_nodes: int = Field(ge=1)
    edges: List[Tuple[int, int]] = Field(default_factory=list)


class RoutingRecord(BaseModel):
    """JSON form of a routing result."""
    swap_count: int
    cnot_overhead: int
    elapsed_s: float
    output_qasm_path: Optional[str] = None
    router: str = ""
    stats: Dict[str, Any] = Field(default_factory=dict)


class LabelerSpec(BaseModel):
    """Which feeding router produces labels, and with which parameters."""
    kind: Literal["sahs", "mcts", "base"]
    depth: int = Field(default=2, ge=1)
    n_bp: int = Field(default=200, ge=1)
    sim_depth: Optional[int] = None


class SampleRecord(BaseModel):
    """
    One line of a dataset's samples.jsonl.

    `encoding` is the base64 of ``numpy.packbits`` over the 0-1 encoding
    vector; `gates` keeps the circuit so the dataset can be re-encoded.
    """
    index: int
    encoding: str
    label: List[float]
    gates: List[Tuple[int, int]] = Field(default_factory=list)


class LabelFailure(BaseModel):
    index: int
    error: str


class DatasetManifest(BaseModel):
    """
    Metadata binding a set of labeled samples to one architecture graph.
    """
    format_version: int = 1
    arch_name: str
    edge_sha: str
    num_nodes: int
    num_edges: int
    n_l: int = Field(ge=1)
    n_c: int = Field(ge=0)
    generator: Literal["sahs", "mcts", "base"]
    generator_params: Dict[str, Any] = Field(default_factory=dict)
    seed: int
    sample_files: List[str] = Field(default_factory=list)
    sample_count: int = 0
    failures: List[LabelFailure] = Field(default_factory=list)

    @property
    def input_dim(self) -> int:
        return self.n_l * self.num_nodes * self.num_nodes


class ModelHeader(BaseModel):
    """Metadata header stored in front of the policy model weights."""
    format_version: int
    arch_name: str
    edge_list_sha: str
    n_q: int
    n_l: int
    num_edges: int
    edges: List[Tuple[int, int]]
    layer_dims: List[int]

    @model_validator(mode="after")
    def check_dims(self) -> "ModelHeader":
        if len(self.layer_dims) < 2:
            raise ValueError("layer_dims needs at least input and output sizes")
        if self.layer_dims[0] != self.n_l * self.n_q * self.n_q:
            raise ValueError("input dimension must equal n_l * n_q^2")
        if self.layer_dims[-1] != self.num_edges or len(self.edges) != self.num_edges:
            raise ValueError("output dimension must equal the edge count")
        return self


class BenchRecord(BaseModel):
    """One (circuit, router) cell of a comparison run."""
    circuit_id: str
    router: str
    swap_count: int
    cnot_overhead: int
    elapsed_s: float
    seed: Optional[int] = None
    input_gates: int = 0
    runs: int = 1

    @field_validator("cnot_overhead")
    @classmethod
    def overhead_is_three_per_swap(cls, v: int, info: Any) -> int:
        swaps = info.data.get("swap_count")
        if swaps is not None and v != 3 * swaps:
            raise ValueError("cnot_overhead must equal 3 * swap_count")
        return v
