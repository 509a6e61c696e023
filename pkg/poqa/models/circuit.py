"""Gate, ansatz configuration and parameterized circuit models."""
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union


class GateKind(str, Enum):
    """Gate set of the simulator."""
    RX = 'rx'
    RY = 'ry'
    RZ = 'rz'
    H = 'h'
    CX = 'cx'
    CZ = 'cz'
    RZZ = 'rzz'

    @property
    def is_rotation(self) -> bool:
        return self in (GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.RZZ)

    @property
    def arity(self) -> int:
        return 2 if self in (GateKind.CX, GateKind.CZ, GateKind.RZZ) else 1

    @property
    def is_diagonal(self) -> bool:
        return self in (GateKind.RZ, GateKind.CZ, GateKind.RZZ)


class Rotation(str, Enum):
    RX = 'rx'
    RY = 'ry'


class Entangler(str, Enum):
    CX = 'cx'
    CZ = 'cz'


class Structure(str, Enum):
    FULL = 'full'
    CIRCULAR = 'circular'
    PAIRWISE = 'pairwise'


@dataclass(frozen=True)
class Parameter:
    """Symbolic angle slot: the bound angle is ``scale * params[index]``."""
    index: int
    scale: float = 1.0

    def resolve(self, params: Sequence[float]) -> float:
        return self.scale * float(params[self.index])


Angle = Union[float, Parameter]


@dataclass(frozen=True)
class Gate:
    """One gate application. For ``cx`` the first target is the control."""
    kind: GateKind
    targets: Tuple[int, ...]
    angle: Optional[Angle] = None

    def __post_init__(self):
        object.__setattr__(self, 'kind', GateKind(self.kind))
        object.__setattr__(self, 'targets', tuple(int(t) for t in self.targets))

        if len(self.targets) != self.kind.arity:
            raise ValueError(
                f"{self.kind.value} acts on {self.kind.arity} qubit(s), got {self.targets}"
            )
        if len(set(self.targets)) != len(self.targets):
            raise ValueError(f"gate targets must be distinct: {self.targets}")
        if any(t < 0 for t in self.targets):
            raise ValueError(f"negative qubit index: {self.targets}")
        if self.kind.is_rotation != (self.angle is not None):
            raise ValueError(f"angle must be given iff {self.kind.value} is a rotation")

    @property
    def is_symbolic(self) -> bool:
        return isinstance(self.angle, Parameter)

    def bind(self, params: Sequence[float]) -> 'Gate':
        if isinstance(self.angle, Parameter):
            return Gate(self.kind, self.targets, self.angle.resolve(params))
        return self

    def __str__(self) -> str:
        qubits = ','.join(f"q{t}" for t in self.targets)
        if self.angle is None:
            return f"{self.kind.value}({qubits})"
        if isinstance(self.angle, Parameter):
            scale = '' if self.angle.scale == 1.0 else f"{self.angle.scale:g}*"
            return f"{self.kind.value}({scale}θ{self.angle.index},{qubits})"
        return f"{self.kind.value}({self.angle:.6g},{qubits})"


# Named design points of the circuit study: label -> (structure, rotation, entangler, reps).
# K and L repeat the reps of H and I in the published legend; they are defined here
# with reps 5, following the pattern of E/F/G.
CONFIG_TABLE: Dict[str, Tuple[str, str, str, int]] = {
    'B': ('full', 'ry', 'cz', 3),
    'C': ('pairwise', 'ry', 'cz', 3),
    'D': ('circular', 'ry', 'cz', 3),
    'E': ('full', 'ry', 'cz', 5),
    'F': ('pairwise', 'ry', 'cz', 5),
    'G': ('circular', 'ry', 'cz', 5),
    'H': ('full', 'rx', 'cx', 3),
    'I': ('pairwise', 'rx', 'cx', 3),
    'J': ('circular', 'rx', 'cx', 3),
    'K': ('full', 'rx', 'cx', 5),
    'L': ('pairwise', 'rx', 'cx', 5),
    'M': ('circular', 'rx', 'cx', 5),
}

CONFIG_LABELS: List[str] = list(CONFIG_TABLE)


@dataclass(frozen=True)
class AnsatzConfig:
    """One point of the two-local design space."""
    rotation: Rotation
    entangler: Entangler
    structure: Structure
    reps: int
    label: Optional[str] = None

    def __post_init__(self):
        try:
            object.__setattr__(self, 'rotation', Rotation(self.rotation))
            object.__setattr__(self, 'entangler', Entangler(self.entangler))
            object.__setattr__(self, 'structure', Structure(self.structure))
        except ValueError as e:
            raise ValueError(f"invalid config: {e}") from e
        if int(self.reps) != self.reps or self.reps < 1:
            raise ValueError(f"invalid config: reps must be a positive integer, got {self.reps}")
        object.__setattr__(self, 'reps', int(self.reps))

        if self.label is not None:
            if self.label not in CONFIG_TABLE:
                raise ValueError(f"unknown config label: {self.label}")
            if self.key() != CONFIG_TABLE[self.label]:
                raise ValueError(
                    f"invalid config: label {self.label} is {CONFIG_TABLE[self.label]}, "
                    f"got {self.key()}"
                )

    @classmethod
    def from_label(cls, label: str) -> 'AnsatzConfig':
        """Look up a named design point B..M."""
        label = label.strip().upper()
        if label not in CONFIG_TABLE:
            raise ValueError(f"unknown config label: {label}")
        structure, rotation, entangler, reps = CONFIG_TABLE[label]
        return cls(rotation, entangler, structure, reps, label)

    def key(self) -> Tuple[str, str, str, int]:
        return (self.structure.value, self.rotation.value, self.entangler.value, self.reps)

    @property
    def name(self) -> str:
        return self.label or "({}, {}, {}, {})".format(*self.key())

    def to_dict(self) -> Dict[str, Any]:
        return {
            'rotation': self.rotation.value,
            'entangler': self.entangler.value,
            'structure': self.structure.value,
            'reps': self.reps,
            'label': self.label,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'AnsatzConfig':
        return cls(
            rotation=data['rotation'],
            entangler=data['entangler'],
            structure=data['structure'],
            reps=data['reps'],
            label=data.get('label'),
        )


@dataclass(frozen=True)
class ParamCircuit:
    """Ordered gate list over ``n`` qubits with ``param_count`` free angle slots.

    ``values`` holds the bound parameter vector for fully bound circuits.
    """
    n: int
    ops: Tuple[Gate, ...]
    param_count: int
    values: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, 'ops', tuple(self.ops))
        for gate in self.ops:
            if any(t >= self.n for t in gate.targets):
                raise ValueError(f"gate {gate} out of range for {self.n} qubits")
            if isinstance(gate.angle, Parameter) and not 0 <= gate.angle.index < self.param_count:
                raise ValueError(f"gate {gate} refers to a missing parameter slot")
        if self.values is not None:
            object.__setattr__(self, 'values', tuple(float(v) for v in self.values))
            if len(self.values) != self.param_count:
                raise ValueError(
                    f"length mismatch: {len(self.values)} values for {self.param_count} slots"
                )

    def bind(self, params: Optional[Sequence[float]] = None) -> List[Gate]:
        """Gates with every symbolic angle resolved."""
        if params is None:
            params = self.values
        if params is None:
            if self.param_count:
                raise ValueError("circuit has free parameters; pass a parameter vector")
            params = ()
        if len(params) != self.param_count:
            raise ValueError(
                f"length mismatch: {len(params)} parameters for {self.param_count} slots"
            )
        return [gate.bind(params) for gate in self.ops]

    def slot_gates(self, index: int) -> List[Gate]:
        """Gates whose angle refers to slot ``index``."""
        return [
            g for g in self.ops
            if isinstance(g.angle, Parameter) and g.angle.index == index
        ]

    def __str__(self) -> str:
        return '\n'.join(str(g) for g in self.ops)
