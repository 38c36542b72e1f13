"""The statistics kinds an ensemble or occupation vector can carry."""
from __future__ import annotations

import enum


class Kind(str, enum.Enum):
    """Counting / occupation statistics.

    ``PROBABILITY`` is a normalised distribution over states (Gibbs form),
    ``EXCLUSION`` allows at most one particle per state (Fermi-Dirac) and
    ``BOSONIC`` allows any number (Bose-Einstein / Planck).
    """

    PROBABILITY = "probability"
    EXCLUSION = "exclusion"
    BOSONIC = "bosonic"

    @classmethod
    def parse(cls, value: "Kind | str") -> "Kind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            choices = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown kind {value!r}; expected one of {choices}") from None

    def __str__(self) -> str:
        return self.value
