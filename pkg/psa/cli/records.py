# psa/cli/records.py
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator


class ComplexValue(BaseModel):
    """Complex number in JSON form"""

    model_config = ConfigDict(frozen=True)

    re: float
    im: float

    @classmethod
    def from_complex(cls, z: complex) -> "ComplexValue":
        return cls(re=float(np.real(z)), im=float(np.imag(z)))

    def to_complex(self) -> complex:
        return complex(self.re, self.im)


def _finite_or_none(value):
    if value is None:
        return None
    value = float(value)
    return value if np.isfinite(value) else None


class RunRecord(BaseModel):
    """Result of one run as emitted on stdout"""

    problem: str
    eps: float
    algorithm: str
    strategy: Optional[str] = None
    N: int = Field(default=1, ge=1)
    alpha: Optional[float] = None
    z: Optional[ComplexValue] = None
    iterations: Optional[int] = None
    wall_time_ms: float = 0.0
    status: str
    oracle_alpha: Optional[float] = None
    error_vs_oracle: Optional[float] = None

    @field_validator("z", mode="before")
    @classmethod
    def _complex_to_pair(cls, value):
        if isinstance(value, (complex, np.complexfloating)):
            if not np.isfinite(value):
                return None
            return ComplexValue.from_complex(value)
        return value

    @field_validator("alpha", "oracle_alpha", "error_vs_oracle", mode="before")
    @classmethod
    def _drop_nonfinite(cls, value):
        return _finite_or_none(value)

    def to_json(self) -> str:
        return self.model_dump_json()

    def with_oracle(self, oracle_alpha: float) -> "RunRecord":
        error = abs(self.alpha - oracle_alpha) if self.alpha is not None else None
        return self.model_copy(update={"oracle_alpha": _finite_or_none(oracle_alpha),
                                       "error_vs_oracle": _finite_or_none(error)})

    def flat(self) -> Dict[str, Any]:
        row = self.model_dump(exclude={"z"})
        row["z_re"] = self.z.re if self.z is not None else None
        row["z_im"] = self.z.im if self.z is not None else None
        return row


class SweepRow(RunRecord):
    """Run record with the swept parameter and any companion estimates"""

    param: str = "eps"
    value: float
    companions: Dict[str, Optional[float]] = Field(default_factory=dict)

    def csv_columns(self) -> List[str]:
        base = ["param", "value"] + [c for c in RUN_COLUMNS if c not in ("param", "value")]
        for name in self.companions:
            base += [f"{name}_alpha", f"{name}_error"]
        return base

    def csv_row(self) -> Dict[str, Any]:
        row = self.flat()
        row.pop("companions", None)
        for name, alpha in self.companions.items():
            row[f"{name}_alpha"] = alpha
            row[f"{name}_error"] = (abs(alpha - self.alpha)
                                    if alpha is not None and self.alpha is not None else None)
        return row


RUN_COLUMNS = [
    "problem", "eps", "algorithm", "strategy", "N", "alpha", "z_re", "z_im", "iterations",
    "wall_time_ms", "status", "oracle_alpha", "error_vs_oracle",
]
