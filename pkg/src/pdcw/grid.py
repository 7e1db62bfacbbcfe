"""Uniformly sampled 2-D fields and their CSV representation."""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import TextIO

import numpy as np

FLOAT_FORMAT = "%.8e"  # 9 significant digits


@dataclass(frozen=True)
class Axis:
    min: float
    max: float
    count: int
    label: str = ""
    unit: str = ""

    def __post_init__(self):
        if self.count < 2:
            raise ValueError(f"axis needs at least 2 samples, got {self.count}")
        if not self.max > self.min:
            raise ValueError("axis max must exceed min")

    @property
    def step(self) -> float:
        return (self.max - self.min) / (self.count - 1)

    def values(self) -> np.ndarray:
        return self.min + self.step * np.arange(self.count)

    @classmethod
    def centered(cls, half_width: float, count: int, label: str = "", unit: str = "") -> "Axis":
        """Axis with spacing ``2*half_width/count`` and the origin on sample ``count // 2``.

        This is the layout ``numpy.fft.fftshift`` produces, so FFT outputs map
        onto it without interpolation.
        """
        step = 2.0 * half_width / count
        return cls(-(count // 2) * step, (count - count // 2 - 1) * step, count, label, unit)


@dataclass(frozen=True)
class Grid2D:
    """Samples ``values[j, k]`` at ``(axis1[j], axis2[k])``."""

    axis1: Axis
    axis2: Axis
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.values.shape != (self.axis1.count, self.axis2.count):
            raise ValueError(
                f"values shape {self.values.shape} does not match axes "
                f"({self.axis1.count}, {self.axis2.count})"
            )

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.values)

    @property
    def cell_area(self) -> float:
        return self.axis1.step * self.axis2.step

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.axis1.values(), self.axis2.values(), indexing="ij")

    def mass(self) -> float:
        """Riemann sum of the (real) samples."""
        return float(np.sum(self.values.real) * self.cell_area)

    def peak(self) -> float:
        return float(np.max(np.abs(self.values)))

    def moments(self) -> tuple[np.ndarray, np.ndarray]:
        """Mean and covariance of the samples treated as a density."""
        w = np.asarray(self.values.real, dtype=float)
        x1, x2 = self.mesh()
        total = w.sum()
        mean = np.array([np.sum(w * x1), np.sum(w * x2)]) / total
        d1, d2 = x1 - mean[0], x2 - mean[1]
        c11 = np.sum(w * d1 * d1) / total
        c22 = np.sum(w * d2 * d2) / total
        c12 = np.sum(w * d1 * d2) / total
        return mean, np.array([[c11, c12], [c12, c22]])

    def pearson(self) -> float:
        """Correlation coefficient between the two axes under the sample density."""
        _, cov = self.moments()
        return float(cov[0, 1] / np.sqrt(cov[0, 0] * cov[1, 1]))

    def write_csv(self, target: str | Path | TextIO) -> None:
        if isinstance(target, (str, Path)):
            with open(target, "w", newline="\n", encoding="ascii") as fh:
                self.write_csv(fh)
            return
        x1, x2 = self.mesh()
        if self.is_complex:
            header = "axis1,axis2,re,im"
            cols = [x1.ravel(), x2.ravel(), self.values.real.ravel(), self.values.imag.ravel()]
        else:
            header = "axis1,axis2,value"
            cols = [x1.ravel(), x2.ravel(), np.asarray(self.values, dtype=float).ravel()]
        target.write(header + "\n")
        np.savetxt(target, np.column_stack(cols), fmt=FLOAT_FORMAT, delimiter=",", newline="\n")

    def to_csv_string(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def read_csv(source: str | Path) -> Grid2D:
    """Inverse of :meth:`Grid2D.write_csv` (axis labels and units are not stored)."""
    with open(source, encoding="ascii") as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    a1 = np.unique(data[:, 0])
    a2 = np.unique(data[:, 1])
    n1, n2 = len(a1), len(a2)
    if header[2:] == ["re", "im"]:
        values = (data[:, 2] + 1j * data[:, 3]).reshape(n1, n2)
    else:
        values = data[:, 2].reshape(n1, n2)
    return Grid2D(Axis(a1[0], a1[-1], n1), Axis(a2[0], a2[-1], n2), values)
