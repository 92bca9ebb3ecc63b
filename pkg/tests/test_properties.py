import importlib

import numpy as np
import pytest

from catalog import builtin_entries, find_relabeling
from forbid_engine import Reconstructed, ReconstructionHints, TruncatedFusion, reconstruct_smatrix
from modular_data import verlinde_fusion

ENTRIES = builtin_entries()


def _fusion(entry):
    return np.asarray(entry.fusion if entry.fusion is not None else verlinde_fusion(entry.S))


@pytest.mark.parametrize("entry", ENTRIES, ids=lambda e: e.name)
def test_fusion_recovers_smatrix(entry):
    N = _fusion(entry)
    fusion = TruncatedFusion(labels=entry.labels, indices=tuple(range(entry.size)), N=N)
    outcome = reconstruct_smatrix(fusion, ReconstructionHints(parent_S=entry.S))
    assert isinstance(outcome, Reconstructed)
    np.testing.assert_allclose(outcome.dims, entry.dims, atol=1e-9)
    assert find_relabeling(outcome.S, np.asarray(entry.S, dtype=complex)) is not None


@pytest.mark.parametrize("entry", ENTRIES, ids=lambda e: e.name)
def test_dimension_product_rule(entry):
    N, d = _fusion(entry), np.asarray(entry.dims, dtype=float)
    for a in range(entry.size):
        for b in range(entry.size):
            assert d[a] * d[b] == pytest.approx(float(N[a, b] @ d), abs=1e-9)


@pytest.mark.parametrize("entry", ENTRIES, ids=lambda e: e.name)
def test_fusion_is_associative(entry):
    N = _fusion(entry)
    # (a x b) x c against a x (b x c), for every outcome d
    left = np.einsum("abe,ecd->abcd", N, N)
    right = np.einsum("bce,aed->abcd", N, N)
    assert np.array_equal(left, right)



PUBLIC_OPERATIONS = {
    "forbid_engine": ["truncate_fusion", "reconstruct_smatrix", "proportional_blocks", "condense",
                      "split_check", "match_catalog", "run_auto", "run_script", "load_scripts",
                      "enumerate_diagram"],
    "modular_data": ["double_anyons", "smatrix_double", "tmatrix_double", "verlinde_fusion",
                     "quantum_dims", "antiparticles", "build_double", "theory_from_smatrix",
                     "validate_theory", "export_theory", "theory_from_export"],
    "flavor_diagram": ["build_diagram", "projector_images", "spec_from_names", "check_spec",
                       "survivors", "export_diagram"],
}


@pytest.mark.parametrize("module_name", sorted(PUBLIC_OPERATIONS))
def test_public_operations_are_documented(module_name):
    module = importlib.import_module(module_name)
    undocumented = [name for name in PUBLIC_OPERATIONS[module_name]
                    if not (getattr(module, name).__doc__ or "").strip()]
    assert undocumented == []
