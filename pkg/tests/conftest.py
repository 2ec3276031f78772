import numpy as np
import pytest

from anisogeo import Constant, CrystalContext, Dip, PNorm, SphereGrid


@pytest.fixture(scope="session")
def grid():
    return SphereGrid.planar(720)


@pytest.fixture(scope="session")
def l1_ctx(grid):
    return CrystalContext(PNorm(1.0), grid)


@pytest.fixture(scope="session")
def euclid_ctx(grid):
    return CrystalContext(Constant(1.0), grid)


@pytest.fixture(scope="session")
def p3_ctx(grid):
    return CrystalContext(PNorm(3.0), grid)


@pytest.fixture(scope="session")
def dip_ctx(grid):
    # Isotropic base lowered to 1/2 along the +x axis.
    return CrystalContext(Dip(Constant(1.0), [((1.0, 0.0), 0.5)]), grid)


@pytest.fixture(scope="session")
def all_ctxs(l1_ctx, euclid_ctx, p3_ctx, dip_ctx):
    return {"l1": l1_ctx, "euclid": euclid_ctx, "p3": p3_ctx, "dip": dip_ctx}


def sorted_rows(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    return a[np.lexsort((a[:, 1], a[:, 0]))]
