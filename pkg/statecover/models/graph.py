"""Transition graph model."""

from typing import Dict, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .statechart import natural_key

ENTRY = "ti"
EXIT = "tf"


def vertex_key(vertex: str) -> Tuple[object, ...]:
    """Order ``ti`` first, ``tf`` last and sequence vertices by their transitions."""
    if vertex == ENTRY:
        return (0,)
    if vertex == EXIT:
        return (2,)
    return (1, tuple(natural_key(part) for part in vertex.split(",")))


def edge_key(edge: Tuple[str, str]) -> Tuple[object, ...]:
    return (vertex_key(edge[0]), vertex_key(edge[1]))


class TransitionGraph(BaseModel):
    """Directed graph whose vertices denote legal transition sequences.

    Level 1 vertices are single transitions; after a k-fold transformation
    each vertex denotes a walk of k transitions and is named by joining the
    ids with commas. ``ti`` and ``tf`` are the entry and exit sentinels.
    """

    model_config = ConfigDict(frozen=True)

    k: int = Field(default=1, ge=1, description="Length of the sequence each vertex denotes")
    vertices: Tuple[str, ...] = Field(default_factory=tuple, description="Vertex names, sentinels included")
    edges: Tuple[Tuple[str, str], ...] = Field(default_factory=tuple, description="Directed edges")
    payload: Dict[str, Tuple[str, ...]] = Field(
        default_factory=dict, description="Transition sequence per non-sentinel vertex"
    )
    augmented: bool = Field(default=False, description="Return edge tf -> ti present")

    @field_validator("vertices")
    @classmethod
    def sort_vertices(cls, v: Tuple[str, ...]) -> Tuple[str, ...]:
        return tuple(sorted(set(v), key=vertex_key))

    @field_validator("edges")
    @classmethod
    def sort_edges(cls, v: Tuple[Tuple[str, str], ...]) -> Tuple[Tuple[str, str], ...]:
        return tuple(sorted(set(v), key=edge_key))

    @model_validator(mode="after")
    def check_references(self) -> "TransitionGraph":
        known = set(self.vertices)
        for source, target in self.edges:
            if source not in known or target not in known:
                raise ValueError(f"Edge ({source}, {target}) references an unknown vertex")
        for vertex in self.vertices:
            if vertex not in (ENTRY, EXIT) and len(self.payload.get(vertex, ())) != self.k:
                raise ValueError(f"Vertex {vertex} needs a payload of {self.k} transitions")
        return self

    @property
    def sequence_vertices(self) -> Tuple[str, ...]:
        return tuple(v for v in self.vertices if v not in (ENTRY, EXIT))

    def successors(self, vertex: str) -> Tuple[str, ...]:
        return tuple(t for s, t in self.edges if s == vertex)

    def predecessors(self, vertex: str) -> Tuple[str, ...]:
        return tuple(s for s, t in self.edges if t == vertex)
