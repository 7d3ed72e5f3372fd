"""Normalised 1-forms on the circle of turns."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .angles import wrap

# integral of exp(-1/(1-t^2)) over (-1, 1)
BUMP_MASS = 0.44399381616807943

KINDS = ("uniform", "bump", "semicircle", "point")


@dataclass(frozen=True)
class OneForm:
    kind: str = "uniform"
    center: Optional[float] = None
    width: Optional[float] = None
    folded: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown form {self.kind!r}")
        if self.kind in ("bump", "semicircle") and not (0 < self.width <= 0.5):
            raise ValueError("bump width must lie in (0, 1/2]")

    @classmethod
    def uniform(cls) -> "OneForm":
        return cls("uniform")

    @classmethod
    def bump(cls, center: float, width: float) -> "OneForm":
        return cls("bump", float(center), float(width))

    @classmethod
    def semicircle(cls, center: float = 0.5) -> "OneForm":
        return cls("semicircle", float(center), 0.25)

    @classmethod
    def point(cls, center) -> "OneForm":
        return cls("point", float(Fraction(center)))

    def fold(self) -> "OneForm":
        """The form pulled back through the angle-doubling fold."""
        return OneForm(self.kind, self.center, self.width, folded=True)

    @property
    def smooth(self) -> bool:
        return self.kind != "point"

    def _density(self, phi):
        phi = np.asarray(phi, dtype=float)
        if self.kind == "uniform":
            return np.ones_like(phi)
        if self.kind == "point":
            raise ValueError("the point form has no density; count preimages instead")
        x = wrap(phi - self.center) / self.width
        inside = np.abs(x) < 1
        safe = np.where(inside, x, 0.0)
        return np.where(inside, np.exp(-1.0 / (1.0 - safe**2)), 0.0) / (
            self.width * BUMP_MASS
        )

    def density(self, phi):
        if self.folded:
            return 0.5 * (self._density(phi) + self._density(np.asarray(phi) + 0.5))
        return self._density(phi)

    def to_json(self) -> dict:
        data = {"kind": self.kind, "folded": self.folded}
        if self.center is not None:
            data["center"] = self.center
        if self.width is not None:
            data["width"] = self.width
        return data

    @classmethod
    def from_json(cls, data: dict) -> "OneForm":
        return cls(
            data["kind"], data.get("center"), data.get("width"), bool(data.get("folded", False))
        )

    def __str__(self):
        if self.kind == "uniform":
            text = "uniform"
        elif self.kind == "bump":
            text = f"bump({self.center:g},{self.width:g})"
        else:
            text = f"{self.kind}({self.center:g})"
        return f"folded {text}" if self.folded else text
