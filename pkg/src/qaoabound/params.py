"""Angle schedules for the alternating-operator circuit.

A :class:`ParamSet` bundles the per-layer angles together with the circuit
depth ``p`` and the graph degree ``d`` they are meant for.  The optional
``gamma_prime`` vector carries the single-qubit phase angles of the
two-parameter cost driver used for independent-set objectives; it is absent
for plain cut optimization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidParameterError


def _angle_tuple(values: Sequence[float], name: str) -> tuple[float, ...]:
    out = tuple(float(v) for v in values)
    for v in out:
        if not math.isfinite(v):
            raise InvalidParameterError(f"{name} contains a non-finite angle: {v!r}")
    return out


@dataclass(frozen=True)
class ParamSet:
    """Immutable angle schedule: depth ``p``, degree ``d``, and angle vectors.

    ``gamma`` and ``beta`` must both have length ``p``; ``gamma_prime``, when
    present, must as well.  Angles are radians.
    """

    d: int
    gamma: tuple[float, ...]
    beta: tuple[float, ...]
    gamma_prime: tuple[float, ...] | None = None

    def __init__(
        self,
        d: int,
        gamma: Sequence[float],
        beta: Sequence[float],
        gamma_prime: Sequence[float] | None = None,
    ):
        if int(d) != d or d < 2:
            raise InvalidParameterError(f"degree d must be an integer >= 2, got {d!r}")
        g = _angle_tuple(gamma, "gamma")
        b = _angle_tuple(beta, "beta")
        if len(g) < 1:
            raise InvalidParameterError("depth p must be >= 1 (empty angle vectors)")
        if len(g) != len(b):
            raise InvalidParameterError(
                f"gamma and beta must have equal length, got {len(g)} and {len(b)}"
            )
        gp = None
        if gamma_prime is not None:
            gp = _angle_tuple(gamma_prime, "gamma_prime")
            if len(gp) != len(g):
                raise InvalidParameterError(
                    f"gamma_prime must have length {len(g)}, got {len(gp)}"
                )
        object.__setattr__(self, "d", int(d))
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "beta", b)
        object.__setattr__(self, "gamma_prime", gp)

    @property
    def p(self) -> int:
        """Circuit depth (number of cost/mixer layer pairs)."""
        return len(self.gamma)

    def with_gamma_prime(self, gamma_prime: Sequence[float] | None) -> "ParamSet":
        return ParamSet(self.d, self.gamma, self.beta, gamma_prime)

    def as_vector(self) -> list[float]:
        """Flatten to the optimizer layout: gamma, beta, then gamma_prime."""
        vec = list(self.gamma) + list(self.beta)
        if self.gamma_prime is not None:
            vec += list(self.gamma_prime)
        return vec

    @classmethod
    def from_vector(
        cls, vec: Sequence[float], p: int, d: int, with_gamma_prime: bool = False
    ) -> "ParamSet":
        expected = 3 * p if with_gamma_prime else 2 * p
        if len(vec) != expected:
            raise InvalidParameterError(
                f"expected a vector of length {expected}, got {len(vec)}"
            )
        gamma = vec[:p]
        beta = vec[p : 2 * p]
        gp = vec[2 * p :] if with_gamma_prime else None
        return cls(d, gamma, beta, gp)

    def to_json_dict(self) -> dict:
        doc = {
            "p": self.p,
            "d": self.d,
            "gamma": list(self.gamma),
            "beta": list(self.beta),
        }
        if self.gamma_prime is not None:
            doc["gamma_prime"] = list(self.gamma_prime)
        return doc

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ParamSet":
        ps = cls(doc["d"], doc["gamma"], doc["beta"], doc.get("gamma_prime"))
        if "p" in doc and doc["p"] != ps.p:
            raise InvalidParameterError(
                f"declared depth {doc['p']} does not match {ps.p} angles"
            )
        return ps
