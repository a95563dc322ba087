from dataclasses import dataclass, field
from typing import Any, Dict, Mapping, Optional, Tuple

from .errors import ReductionError
from .instance import Edge, Instance, Side, Vertex
from .master_list import MasterList
from .restrictions import RestrictedEdgeSets


@dataclass(frozen=True)
class ReductionOutput:
    """
    A constructed instance together with the registry that ties it back to
    its source: a role name for every constructed vertex and a stage tag for
    every constructed edge.
    """
    instance: Instance
    restricted: RestrictedEdgeSets
    roles: Mapping[Vertex, str]
    stages: Mapping[Edge, str]
    source: Any = None
    master_list: Optional[MasterList] = None
    extras: Mapping[str, Any] = field(default_factory=dict)
    _handles: Dict[str, Vertex] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        expected = {Vertex(Side.MAN, i) for i in self.instance.men} | {Vertex(Side.WOMAN, j) for j in self.instance.women}
        if set(self.roles) != expected:
            raise ReductionError("registry roles must cover every constructed vertex")
        if set(self.stages) != set(self.instance.edges):
            raise ReductionError("stage tags must cover every constructed edge")
        handles = {}
        for vertex, name in self.roles.items():
            if name in handles:
                raise ReductionError(f"role name {name} is used twice")
            handles[name] = vertex
        object.__setattr__(self, "_handles", handles)

    def vertex(self, name: str) -> Vertex:
        try:
            return self._handles[name]
        except KeyError:
            raise ReductionError(f"no constructed vertex is named {name}") from None

    def edge(self, man_name: str, woman_name: str) -> Edge:
        u, w = self.vertex(man_name), self.vertex(woman_name)
        if u.side is not Side.MAN or w.side is not Side.WOMAN:
            raise ReductionError(f"{man_name}-{woman_name} does not join a man to a woman")
        return (u.index, w.index)

    def edges_with_stage(self, tag: str) -> Tuple[Edge, ...]:
        return tuple(sorted(e for e, t in self.stages.items() if t == tag))

    def stage_counts(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for tag in self.stages.values():
            counts[tag] = counts.get(tag, 0) + 1
        return counts
