from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from pathgauge.models.network_models import Activation, Architecture, Neuron, Parameters


def _as_id(value):
    # YAML reads bare numbers as ints; neuron ids are always strings
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return str(value)
    return value


class NeuronSchema(BaseModel):
    id: str
    activation: Activation
    k: Optional[int] = None

    @field_validator("id", mode="before")
    @classmethod
    def coerce_id(cls, value):
        return _as_id(value)


class EdgeSchema(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    source: str = Field(alias="from")
    to: str
    weight: float

    @field_validator("source", "to", mode="before")
    @classmethod
    def coerce_ids(cls, value):
        return _as_id(value)


class NetworkDocument(BaseModel):
    name: Optional[str] = None
    neurons: List[NeuronSchema]
    edges: List[EdgeSchema] = []
    biases: Dict[str, float] = {}

    @field_validator("biases", mode="before")
    @classmethod
    def coerce_bias_keys(cls, value):
        if value is None:
            return {}
        if isinstance(value, dict):
            return {_as_id(key): bias for key, bias in value.items()}
        return value

    @field_validator("edges", mode="before")
    @classmethod
    def allow_missing_edges(cls, value):
        return [] if value is None else value

    def to_network(self) -> Tuple[Architecture, Parameters]:
        """Architecture and parameters; biases not listed default to 0."""
        arch = Architecture.build(
            [Neuron(n.id, n.activation, n.k) for n in self.neurons],
            [(e.source, e.to) for e in self.edges],
            name=self.name,
        )
        declared_inputs = {n.id for n in self.neurons if n.activation == Activation.INPUT}
        biases = {n.id: 0.0 for n in self.neurons if n.id not in declared_inputs}
        biases.update(self.biases)
        params = Parameters(
            weights={(e.source, e.to): e.weight for e in self.edges},
            biases=biases,
        )
        return arch, params

    @classmethod
    def from_network(cls, arch: Architecture, params: Parameters) -> "NetworkDocument":
        return cls(
            name=arch.name,
            neurons=[NeuronSchema(id=n.id, activation=n.activation, k=n.k) for n in arch.neurons],
            edges=[
                EdgeSchema(source=u, to=v, weight=params.weight(u, v)) for u, v in arch.edges
            ],
            biases={v: params.biases[v] for v in sorted(params.biases)},
        )

    def as_yaml_dict(self) -> dict:
        document = {}
        if self.name is not None:
            document["name"] = self.name
        document["neurons"] = [
            {"id": n.id, "activation": n.activation.value, **({"k": n.k} if n.k is not None else {})}
            for n in self.neurons
        ]
        document["edges"] = [{"from": e.source, "to": e.to, "weight": e.weight} for e in self.edges]
        document["biases"] = dict(self.biases)
        return document
