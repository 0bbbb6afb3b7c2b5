"""Roberts module schemas - end structures and class keys."""

from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field


class EndStructure(BaseModel):
    """A minimal transition-closed state set; cycle and trees filled for one-action deterministic input."""

    model_config = ConfigDict(frozen=True)

    states: Tuple[int, ...]
    cycle: Tuple[int, ...] = ()
    trees: Dict[int, Tuple[int, ...]] = Field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.states)


class ClassKey(BaseModel):
    """Canonical bisimulation-class label: the word prefix . rotation^omega in reduced form."""

    model_config = ConfigDict(frozen=True)

    prefix: Tuple[int, ...] = ()
    rotation: Tuple[int, ...]
    anchor: Tuple[int, ...]

    def render(self, labels: Optional[Sequence[str]] = None) -> Tuple[str, str]:
        """Prefix and rotation as strings over the block labels (block ids when unlabeled)."""
        return _spell(self.prefix, labels), _spell(self.rotation, labels)

    def word(self, labels: Optional[Sequence[str]] = None) -> str:
        prefix, rotation = self.render(labels)
        return prefix + rotation


class RobertsRow(BaseModel):
    state: str
    prefix: str
    rotation: str
    block: int


class RobertsReport(BaseModel):
    """Class table and partition written by the roberts command."""

    n: int
    end_structures: int
    classes: int
    comparisons: int
    table: List[RobertsRow]
    partition: List[List[str]]


def _spell(symbols: Tuple[int, ...], labels: Optional[Sequence[str]]) -> str:
    names = [labels[s] if labels else str(s) for s in symbols]
    if all(len(name) == 1 for name in names):
        return "".join(names)
    return ".".join(names)
