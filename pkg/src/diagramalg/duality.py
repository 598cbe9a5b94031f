"""Double-centralizer verification.

For each family the engine builds the group side (the unital algebra
generated by the derived Lie algebra action, plus one reflection for the
full orthogonal group) and the diagram side (the span of the representing
matrices of the diagram basis), computes both commutants, and compares
spans.  Containments hold automatically because the two actions commute;
the content of the verification is the dimension count, which is why the
report carries all four dimensions.

The deranged family is too large for span saturation of the group image
(it has dimension 11732 inside 225 x 225 matrices at n=4, r=2), so there
the group image dimension is computed as the commutant of the commutant
of the generators; for a semisimple algebra in characteristic zero the
double commutant is the algebra itself.  Those dimensions are computed
modulo two primes and tagged as such in the report.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .combinatorics import derangements, diagram_count, walled_count
from .diagrams import CapExceededError, Wall, enumerate_diagrams, is_walled
from .linalg import (
    DEFAULT_PRIMES,
    DEFAULT_UNKNOWN_CAP,
    MatrixSpan,
    algebra_closure,
    commutant,
    graded_commutant_dim,
    mat_to_modp,
    span_equal,
)
from .tensor import (
    AdjointSpace,
    BilinearForm,
    MixedSpace,
    TensorSpace,
    adjoint_transport,
    check_dim,
    deranged_matrix,
    derivation_action,
    diagram_matrix,
    lie_basis,
    mixed_diagram_matrix,
    reflection_matrix,
    sigma_perm,
    weight_vectors,
)

FAMILIES = ("glA", "sp", "o", "so-direct", "walled", "deranged")


@dataclass
class DualityReport:
    """Outcome of one double-centralizer verification."""

    family: str
    n: int
    r: int
    s: int | None
    dims: dict
    equal_a: bool | None
    equal_b: bool | None
    faithful: bool | None
    method: str
    elapsed_ms: int | None = None
    extra: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        out = {
            "family": self.family,
            "n": self.n,
            "r": self.r,
            "s": self.s,
            "dims": {
                "group_image": self.dims.get("group_image"),
                "diagram_image": self.dims.get("diagram_image"),
                "commutant_of_diagram": self.dims.get("commutant_of_diagram"),
                "commutant_of_group": self.dims.get("commutant_of_group"),
            },
            "equal_a": self.equal_a,
            "equal_b": self.equal_b,
            "faithful": self.faithful,
            "method": self.method,
            "elapsed_ms": self.elapsed_ms,
        }
        out.update(self.extra)
        return out

    @property
    def verified(self) -> bool:
        return bool(self.equal_a) and bool(self.equal_b)


def _combine_methods(*labels: str) -> str:
    if all(l == "exact" for l in labels):
        return "exact"
    if all(l in ("exact", "mod-p-confirmed-exact") for l in labels):
        return "mod-p-confirmed-exact"
    mods = [l for l in labels if l.startswith("mod-p(")]
    return mods[0] if mods else "mod-p"


def _standard_sides(family: str, n: int, r: int, s: int | None,
                    enum_cap: int, x0=None):
    """Space dimension, diagram matrices, group generator matrices and the
    abstract diagram-algebra dimension for the span-based families."""
    if family == "glA":
        space = TensorSpace(n, r)
        diagram_mats = [sigma_perm(w, space)
                        for w in itertools.permutations(range(r))]
        gens = [derivation_action(x, space) for x in lie_basis("gl", n)]
        return space.dim, diagram_mats, gens, factorial(r)
    if family in ("o", "sp"):
        flavor = "symmetric" if family == "o" else "symplectic"
        form = BilinearForm(flavor, n)
        space = TensorSpace(n, r)
        diagram_mats = [diagram_matrix(d, space, form)
                        for d in enumerate_diagrams(r, cap=enum_cap)]
        gens = [derivation_action(x, space)
                for x in lie_basis("so" if family == "o" else "sp", n)]
        if family == "o":
            gens.append(reflection_matrix(n, r))
        return space.dim, diagram_mats, gens, diagram_count(r)
    if family == "walled":
        space = MixedSpace(n, r, s)
        wall = Wall(r, s)
        diagram_mats = [mixed_diagram_matrix(d, space)
                        for d in enumerate_diagrams(wall.m, cap=enum_cap)
                        if is_walled(d, wall)]
        gens = [derivation_action(x, space) for x in lie_basis("gl", n)]
        return space.dim, diagram_mats, gens, walled_count(r, s)
    raise ValueError(f"unknown standard family {family!r}")


def _verify_span_family(family, n, r, s, mode, primes, enum_cap, solver_cap):
    d, diagram_mats, gens, abstract_dim = _standard_sides(
        family, n, r, s, enum_cap)
    diagram_span = MatrixSpan.from_matrices(diagram_mats, d)
    group_span = algebra_closure(gens, d, primes=primes)
    comm_diag_span, comm_diag = commutant(
        diagram_mats, d, mode=mode, primes=primes, unknown_cap=solver_cap)
    comm_group_span, comm_group = commutant(
        gens, d, mode=mode, primes=primes, unknown_cap=solver_cap)
    if comm_diag_span is None or comm_group_span is None:
        equal_a = group_span.dim == comm_diag.nullity
        equal_b = diagram_span.dim == comm_group.nullity
    else:
        equal_a = span_equal(group_span, comm_diag_span)
        equal_b = span_equal(diagram_span, comm_group_span)
    dims = {
        "group_image": group_span.dim,
        "diagram_image": diagram_span.dim,
        "commutant_of_diagram": comm_diag.nullity,
        "commutant_of_group": comm_group.nullity,
    }
    method = _combine_methods("exact", comm_diag.method, comm_group.method)
    return DualityReport(family, n, r, s, dims, equal_a, equal_b,
                         diagram_span.dim == abstract_dim, method)


def _verify_so_direct(n, r, mode, primes, solver_cap):
    """No diagram side here: only the strict containment of the full
    orthogonal commutant inside the rotation-only commutant is computed."""
    space = TensorSpace(n, r)
    gens_so = [derivation_action(x, space) for x in lie_basis("so", n)]
    gens_o = gens_so + [reflection_matrix(n, r)]
    _, so_comm = commutant(gens_so, space.dim, mode=mode, primes=primes,
                           want_basis=False, unknown_cap=solver_cap)
    _, o_comm = commutant(gens_o, space.dim, mode=mode, primes=primes,
                          want_basis=False, unknown_cap=solver_cap)
    dims = {
        "group_image": None,
        "diagram_image": None,
        "commutant_of_diagram": None,
        "commutant_of_group": so_comm.nullity,
    }
    extra = {
        "so_commutant": so_comm.nullity,
        "o_commutant": o_comm.nullity,
        "proper_subalgebra": o_comm.nullity < so_comm.nullity,
    }
    return DualityReport("so-direct", n, r, None, dims, None, None, None,
                         _combine_methods(so_comm.method, o_comm.method),
                         extra=extra)


def _verify_deranged(n, r, mode, primes, solver_cap):
    from .algebra import deranged_basis

    space = AdjointSpace(n, r)
    check_dim(space)
    d = space.dim
    if d * d > solver_cap:
        raise CapExceededError(
            f"{d * d} matrix-space unknowns exceed the solver cap {solver_cap}")
    transport = adjoint_transport(n, r)
    elements = deranged_basis(r, n)
    diagram_mats = [deranged_matrix(el.element, n, r, transport=transport)
                    for el in elements]
    diagram_span = MatrixSpan.from_matrices(diagram_mats, d)

    gens = [derivation_action(x, space) for x in lie_basis("gl", n)]

    # Commutant of the group side: sparse, torus-reduced, exact via the
    # certified modular route; its basis realizes End of the group action
    # and is needed exactly, whatever the requested mode.
    comm_group_span, comm_group = commutant(
        gens, d, mode="auto", primes=primes, unknown_cap=solver_cap)
    equal_b = (comm_group_span is not None
               and span_equal(diagram_span, comm_group_span))

    # The remaining two dimensions live in a 50625-unknown matrix space;
    # the torus grading splits them into small independent blocks.
    weights = weight_vectors(space)
    chunk_mode = "exact" if mode == "exact" else "modular"
    comm_diag_dim, m1 = graded_commutant_dim(diagram_mats, weights,
                                             mode=chunk_mode, primes=primes)
    group_image_dim, m2 = graded_commutant_dim(
        [m for m in comm_group_span.basis], weights,
        mode=chunk_mode, primes=primes)

    # Containment of the group image in the diagram commutant reduces to
    # the generators commuting with the diagram matrices; screen it
    # modulo the first prime (the small cases are checked exactly in the
    # test suite).
    p = primes[0]
    gens_p = [mat_to_modp(g, p) for g in gens]
    diag_p = [mat_to_modp(m, p) for m in diagram_mats]
    for gp in gens_p:
        for mp in diag_p:
            if np.any((gp @ mp - mp @ gp) % p):
                raise ArithmeticError("group and diagram actions fail to commute")

    equal_a = group_image_dim == comm_diag_dim
    dims = {
        "group_image": group_image_dim,
        "diagram_image": diagram_span.dim,
        "commutant_of_diagram": comm_diag_dim,
        "commutant_of_group": comm_group.nullity,
    }
    method = _combine_methods(comm_group.method, m1, m2)
    return DualityReport("deranged", n, r, r, dims, equal_a, equal_b,
                         diagram_span.dim == derangements(2 * r), method,
                         extra={"group_image_via": "double commutant"})


def verify_duality(
    family: str,
    n: int,
    r: int,
    s: int | None = None,
    mode: str = "auto",
    primes=DEFAULT_PRIMES,
    enum_cap: int = 6,
    solver_cap: int = DEFAULT_UNKNOWN_CAP,
    with_timing: bool = False,
) -> DualityReport:
    """Run one double-centralizer verification and report dimensions,
    equality flags and the faithfulness of the diagram action.

    ``s`` is only meaningful for the walled family.  ``mode`` selects the
    arithmetic: 'exact', 'modular', or 'auto' (exact where cheap,
    certified modular elsewhere).
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")
    if family == "sp" and n % 2 != 0:
        raise ValueError("the symplectic family needs even n")
    if family == "walled":
        if s is None:
            raise ValueError("the walled family needs s")
    elif family == "deranged":
        if s is not None and s != r:
            raise ValueError("the deranged family lives on (r, r) columns")
    elif s is not None:
        raise ValueError(f"family {family!r} does not take s")
    t0 = time.monotonic()
    if family == "so-direct":
        report = _verify_so_direct(n, r, mode, primes, solver_cap)
    elif family == "deranged":
        report = _verify_deranged(n, r, mode, primes, solver_cap)
    else:
        report = _verify_span_family(family, n, r, s, mode, primes,
                                     enum_cap, solver_cap)
    if with_timing:
        report.elapsed_ms = int((time.monotonic() - t0) * 1000)
    return report
