"""Induction orderings, induced modules, and the simplicity machinery."""

import numpy as np
import pytest

from colorlie.algebra import ColorAlgebra, TriangularData, make_gl, subalgebra
from colorlie.envelope import chi_reduce
from colorlie.errors import (BadWeight, ChiOnDelta, ChiOnNplus, DoubledRoot,
                             MixedSpecs, NoOrderingFound, NotScalar,
                             NotStandard, NotUnipotent, OddElement, TooLarge)
from colorlie.field import Field
from colorlie.groups import (Bicharacter, GradedGroup, super_bicharacter,
                             trivial_bicharacter)
from colorlie.linalg import Mat
from colorlie.repmod import (BaseModule, FPTriple, GradedModule, PCharacter,
                             admissible_lambdas, extract_kappa, f_closed,
                             f_via_hc, fp_order, is_simple,
                             module_from_wire, module_isomorphism, pchar_zero,
                             regular_module, root_datum, simple_quotient,
                             singular_vectors, sweep_rows, unipotent_socle,
                             verma_build, weight_tuple)

F5 = Field(5)


def gl2():
    return make_gl(trivial_bicharacter(GradedGroup([]), F5), {(): 2})


def gl3():
    return make_gl(trivial_bicharacter(GradedGroup([]), F5), {(): 3})


def gl11():
    _, eps = super_bicharacter(F5)
    return make_gl(eps, {(0,): 1, (1,): 1})


def gl21():
    _, eps = super_bicharacter(F5)
    return make_gl(eps, {(0,): 2, (1,): 1})


def anti_gl3():
    """gl(3) graded by Z/2 x Z/2 with anticommuting off-blocks."""
    G = GradedGroup([2, 2])
    one, neg = F5.one, F5.neg(F5.one)
    eps = Bicharacter(G, F5, [[one, neg], [neg, one]])
    return make_gl(eps, {(0, 0): 1, (1, 0): 1, (0, 1): 1})


def line_algebra(degree=(), orders=(), pmap={0: {}}):
    G = GradedGroup(list(orders))
    if orders:
        _, eps = super_bicharacter(F5)
    else:
        eps = trivial_bicharacter(G, F5)
    return ColorAlgebra(eps, ["x"], [degree], {}, pmap=pmap)


def zero_spec(A):
    return chi_reduce(A, pchar_zero(A))


# -- induction orderings ---------------------------------------------------------


def test_fp_order_gl3_borel():
    A = gl3()
    trip = fp_order(A)
    assert [A.names[t] for t in trip.deltas] == ["e_12", "e_13", "e_23"]
    assert trip.levi == ()
    assert len(trip.certificates["steps"]) == 3
    assert trip.certificates["final_positive_system"]
    for cert in trip.certificates["steps"]:
        assert all(cert.values())


def test_fp_order_gl3_levi():
    A = gl3()
    trip = fp_order(A, levi=[A.index_of("e_12")])
    assert [A.names[t] for t in trip.deltas] == ["e_23", "e_13"]


def test_fp_order_reverse_ordering_rejected():
    A = gl3()
    trip = fp_order(A, levi=[A.index_of("e_12")])
    with pytest.raises(ValueError, match="simple_root"):
        FPTriple(A, trip.levi, list(reversed(trip.deltas)))


def test_fp_order_gl2_and_full_levi():
    A = gl2()
    trip = fp_order(A)
    assert [A.names[t] for t in trip.deltas] == ["e_12"]
    B = gl3()
    full = fp_order(B, levi=list(root_datum(B).pos))
    assert full.deltas == ()
    assert full.certificates["final_positive_system"]


def test_fp_order_levi_not_normalizing():
    # {+-(eps1 - eps3)} is a subsystem, but no ordering of the two other
    # positive roots survives the normalization condition
    A = gl3()
    with pytest.raises(NoOrderingFound):
        fp_order(A, levi=[A.index_of("e_13")])


def test_fptriple_validation_errors():
    A = gl3()
    tri = root_datum(A)
    e12, e23, e13 = (A.index_of(n) for n in ("e_12", "e_23", "e_13"))
    with pytest.raises(ValueError, match="overlap"):
        FPTriple(A, [e12], [e12, e13, e23])
    with pytest.raises(ValueError, match="cover"):
        FPTriple(A, [e12], [e13])
    with pytest.raises(ValueError, match="repeated"):
        FPTriple(A, [e12], [e13, e13])
    with pytest.raises(ValueError, match="positive-root letter"):
        FPTriple(A, [tri.cartan[0]], [e12, e13, e23])
    with pytest.raises(ValueError, match="positive-root letter"):
        fp_order(A, levi=[tri.neg[0]])


def doubled_line():
    """Abelian algebra with decorative triangular data whose root system
    contains both d and 2d (a genuine FP ordering cannot exist there)."""
    eps = trivial_bicharacter(GradedGroup([]), F5)
    names = ["f2", "f1", "h", "e1", "e2"]
    tri = TriangularData(
        neg=[0, 1], cartan=[2], pos=[3, 4],
        roots={3: (1,), 4: (2,), 1: (-1,), 0: (-2,)},
        heights={3: 1, 4: 2, 1: 1, 0: 2},
        pairs={3: (3, 1, {2: 1}), 4: (4, 0, {2: 2})})
    return ColorAlgebra(eps, names, [()] * 5, {},
                        pmap={i: {} for i in range(5)}, triangular=tri)


def test_doubled_root_system_has_no_ordering():
    A = doubled_line()
    with pytest.raises(NoOrderingFound):
        fp_order(A)


def test_f_closed_rejects_doubled_roots():
    A = doubled_line()

    class Stub:
        algebra = A
        deltas = (3, 4)

        def delta_roots(self):
            return [(1,), (2,)]

    with pytest.raises(DoubledRoot):
        f_closed(zero_spec(A), Stub(), (0,))


# -- weights ---------------------------------------------------------------------


def test_weight_tuple_forms():
    A = gl2()
    h11, h22 = A.index_of("e_11"), A.index_of("e_22")
    assert weight_tuple(A, (3, 1)) == (3, 1)
    assert weight_tuple(A, {h22: 1, h11: 3}) == (3, 1)
    with pytest.raises(BadWeight):
        weight_tuple(A, (3, 1, 0))
    with pytest.raises(BadWeight):
        weight_tuple(A, (5, 0))
    with pytest.raises(BadWeight):
        weight_tuple(A, {A.index_of("e_12"): 1})


def test_admissible_lambdas_zero_chi():
    A = gl2()
    lams = admissible_lambdas(zero_spec(A))
    assert len(lams) == 25
    assert lams[0] == (0, 0) and lams[-1] == (4, 4)


def test_admissible_lambdas_artin_schreier():
    # over F_25 the fibre is empty unless the 5th power of the character
    # value has zero trace
    F = Field(5, 2)
    A = make_gl(trivial_bicharacter(GradedGroup([]), F), {(): 2})
    h11 = A.index_of("e_11")
    bad = chi_reduce(A, PCharacter(A, linear={h11: 1}))
    assert admissible_lambdas(bad) == []
    good_code = next(a for a in range(1, F.q)
                     if F.trace_to_prime(F.pow(a, 5)) == 0)
    good = chi_reduce(A, PCharacter(A, linear={h11: good_code}))
    lams = admissible_lambdas(good)
    assert len(lams) == 25
    for lam in lams:
        assert F.sub(F.pow(lam[0], 5), lam[0]) == F.pow(good_code, 5)


# -- induced modules -------------------------------------------------------------


def test_verma_gl2_action_formula():
    # e . (f^a (x) v) = a (t - a + 1) f^{a-1} (x) v  at  t = lam(H) = 2
    A = gl2()
    spec = zero_spec(A)
    trip = fp_order(A)
    M = verma_build(spec, trip, weight=(2, 0))
    assert M.dim == 5
    assert M.labels == [((a,), 0) for a in range(5)]
    assert M.weights == [(2, 0), (1, 1), (0, 2), (4, 3), (3, 4)]
    assert M.heights == [0, 1, 2, 3, 4]
    e, f = A.index_of("e_12"), A.index_of("e_21")
    ecols = M.action[e].to_codes()
    t = 2
    for a in range(5):
        want = [0] * 5
        if a:
            want[a - 1] = (a * (t - a + 1)) % 5
        assert list(ecols[:, a]) == want
    for a in range(4):
        assert M.action[f].entry(a + 1, a) == 1
    assert M.action[f].a[:, 4].sum() == 0  # f^5 = 0 at chi = 0


def test_verma_sizes():
    for build, dim in ((gl11, 2), (gl3, 125), (gl21, 20)):
        A = build()
        spec = zero_spec(A)
        M = verma_build(spec, fp_order(A), weight=(0,) * len(root_datum(A).cartan))
        assert M.dim == dim
        M.validate()


def test_verma_errors():
    A = gl2()
    spec = zero_spec(A)
    trip = fp_order(A)
    with pytest.raises(BadWeight):
        verma_build(spec, trip)
    with pytest.raises(TooLarge):
        verma_build(spec, trip, weight=(0, 0), max_dim=4)
    other = gl2()
    with pytest.raises(MixedSpecs):
        verma_build(spec, fp_order(other), weight=(0, 0))
    chi = PCharacter(A, linear={A.index_of("e_21"): 1})
    with pytest.raises(ChiOnDelta):
        verma_build(chi_reduce(A, chi), fp_order(A), weight=(0, 0))


def test_verma_rejects_class_characters():
    from colorlie.repmod import PowerClass
    A = anti_gl3()
    xi = next(i for i in range(A.dim) if A.is_even(i)
              and A.degree(i) != A.group.zero)
    cls = PowerClass(A.degree(xi), xi, {xi: F5.one}, 2)
    spec = chi_reduce(A, PCharacter(A, fclasses=[cls]))
    with pytest.raises(NotStandard):
        verma_build(spec, fp_order(A), weight=(0, 0, 0))


def test_levi_line_base_needs_vanishing_on_levi():
    A = gl3()
    spec = zero_spec(A)
    trip = fp_order(A, levi=[A.index_of("e_12")])
    M = verma_build(spec, trip, weight=(2, 2, 0))
    assert M.dim == 25
    with pytest.raises(BadWeight):
        verma_build(spec, trip, weight=(2, 1, 0))


def natural_base(spec, trip):
    """The 2-dim natural module of the gl(2) Levi block inside gl(3)."""
    A = spec.algebra
    idx = {n: A.index_of(n) for n in A.names}

    def mat(entries):
        m = np.zeros((2, 2), dtype=np.int64)
        for (i, j), c in entries.items():
            m[i, j] = c
        return Mat.from_codes(F5, m)

    action = {
        idx["e_12"]: mat({(0, 1): 1}),
        idx["e_21"]: mat({(1, 0): 1}),
        idx["e_11"]: mat({(0, 0): 1}),
        idx["e_22"]: mat({(1, 1): 1}),
        idx["e_33"]: mat({}),
        idx["e_23"]: mat({}),
        idx["e_13"]: mat({}),
    }
    return BaseModule(spec, trip, action, [(1, 0, 0), (0, 1, 0)],
                      [A.group.zero] * 2, [0, 1])


def test_parabolic_induction_with_matrix_base():
    A = gl3()
    spec = zero_spec(A)
    trip = fp_order(A, levi=[A.index_of("e_12")])
    base = natural_base(spec, trip)
    M = verma_build(spec, trip, base=base)
    assert M.dim == 50
    M.validate()
    assert not is_simple(M)["simple"]
    with pytest.raises(ValueError, match="not both"):
        verma_build(spec, trip, weight=(0, 0, 0), base=base)


def test_base_module_validation_errors():
    A = gl3()
    spec = zero_spec(A)
    trip = fp_order(A, levi=[A.index_of("e_12")])
    base = natural_base(spec, trip)
    act = dict(base.action)
    bad = dict(act)
    bad[A.index_of("e_32")] = act[A.index_of("e_12")]
    with pytest.raises(ValueError, match="induced letter"):
        BaseModule(spec, trip, bad, base.weights, base.degrees, base.heights)
    bad = dict(act)
    del bad[A.index_of("e_11")]
    with pytest.raises(ValueError, match="missing action"):
        BaseModule(spec, trip, bad, base.weights, base.degrees, base.heights)
    with pytest.raises(ValueError, match="height homogeneous"):
        BaseModule(spec, trip, act, base.weights, base.degrees, [0, 0])
    bad = dict(act)
    bad[A.index_of("e_23")] = act[A.index_of("e_12")]
    with pytest.raises(ValueError, match="act as zero"):
        BaseModule(spec, trip, bad, base.weights, base.degrees, base.heights)


def test_graded_module_validate_catches_corruption():
    A = gl2()
    spec = zero_spec(A)
    M = verma_build(spec, fp_order(A), weight=(2, 0))
    e = A.index_of("e_12")
    act = {i: m.copy() for i, m in M.action.items()}
    act[e].a[0, 1, 0] = 3
    broken = GradedModule(spec, act, M.weights, M.degrees, M.heights,
                          check=False)
    with pytest.raises(ValueError):
        broken.validate()


def test_module_wire_dump():
    A = gl11()
    spec = zero_spec(A)
    M = verma_build(spec, fp_order(A), weight=(1, 3))
    wire = M.to_wire()
    assert sorted(wire) == ["action", "basis", "dim", "heights", "weights"]
    assert wire["dim"] == 2
    assert wire["basis"] == [[[0], 0], [[1], 0]]
    assert wire["weights"] == [[[1], [3]], [[0], [4]]]
    assert wire["heights"] == [0, 1]
    assert len(wire["action"]) == A.dim
    for i, rows in wire["action"]:
        got = Mat(F5, np.asarray(rows, dtype=np.int64))
        assert got == M.action[i]
    back = module_from_wire(spec, wire)
    assert back.to_wire() == wire
    assert back.labels == M.labels


# -- singular vectors and simplicity ----------------------------------------------


def test_singular_vectors_gl2():
    A = gl2()
    spec = zero_spec(A)
    trip = fp_order(A)
    M = verma_build(spec, trip, weight=(2, 0))
    sv = singular_vectors(M)
    exps = sorted(int(np.nonzero(v.any(axis=-1))[0][0])
                  for vecs in sv.values() for v in vecs)
    assert exps == [0, 3]
    M4 = verma_build(spec, trip, weight=(4, 0))
    sv4 = singular_vectors(M4)
    assert sum(len(v) for v in sv4.values()) == 1
    (key, vecs), = sv4.items()
    assert vecs[0][0, 0] == 1  # the generator line 1 (x) v


def test_is_simple_gl2():
    A = gl2()
    spec = zero_spec(A)
    trip = fp_order(A)
    good = is_simple(verma_build(spec, trip, weight=(4, 0)))
    assert good["simple"] and good["method"] == "exhaustive"
    bad = is_simple(verma_build(spec, trip, weight=(2, 0)))
    assert not bad["simple"]
    assert bad["witness"] is not None and bad["weight"] is not None


def test_is_simple_needs_vanishing_chi_on_raising():
    A = gl2()
    M = verma_build(zero_spec(A), fp_order(A), weight=(4, 0))
    chi = PCharacter(A, linear={A.index_of("e_12"): 1})
    hacked = GradedModule(chi_reduce(A, chi), M.action, M.weights, M.degrees,
                          M.heights, check=False)
    with pytest.raises(ChiOnNplus):
        is_simple(hacked)


# -- the simplicity value, two ways ------------------------------------------------


def test_f_values_gl2():
    # f_closed = (t+1)^4 - 1 and f_hc = 4!((t+1)^4 - 1) at t = lam(H)
    A = gl2()
    spec = zero_spec(A)
    trip = fp_order(A)
    for t in range(5):
        fc = f_closed(spec, trip, (t, 0))
        fh, rev = f_via_hc(spec, trip, (t, 0))
        want = (pow(t + 1, 4, 5) - 1) % 5
        assert fc == want
        assert fh == (24 * want) % 5
        assert rev == 1


def test_f_values_gl11():
    # single odd root: f = lam(e_11) + lam(e_22) on the nose
    A = gl11()
    spec = zero_spec(A)
    trip = fp_order(A)
    for lam in admissible_lambdas(spec):
        assert f_closed(spec, trip, lam) == (lam[0] + lam[1]) % 5
        fh, _ = f_via_hc(spec, trip, lam)
        assert (fh == 0) == ((lam[0] + lam[1]) % 5 == 0)


def test_f_zero_loci_agree_gl21():
    # frozen closed form: [(l1-l2+1)^4 - 1](l1+l3+1)(l2+l3)
    A = gl21()
    spec = zero_spec(A)
    trip = fp_order(A)
    for lam in admissible_lambdas(spec):
        l1, l2, l3 = lam
        want = ((pow(l1 - l2 + 1, 4, 5) - 1)
                * (l1 + l3 + 1) * (l2 + l3)) % 5
        fc = f_closed(spec, trip, lam)
        fh, _ = f_via_hc(spec, trip, lam)
        assert (fc == 0) == (want == 0)
        assert (fh == 0) == (want == 0)


# -- weight sweeps -----------------------------------------------------------------


def test_sweep_gl2_zero_chi():
    A = gl2()
    rows = sweep_rows(zero_spec(A), fp_order(A))
    assert len(rows) == 25
    assert all(r["agree"] for r in rows)
    simple = [tuple(r["lambda"]) for r in rows if r["oracle"] == "simple"]
    assert len(simple) == 5
    for lam in simple:
        assert (lam[0] - lam[1]) % 5 == 4
    assert sorted(rows[0]) == ["agree", "f_closed", "f_hc", "lambda", "oracle"]


def test_sweep_gl11_zero_chi():
    A = gl11()
    rows = sweep_rows(zero_spec(A), fp_order(A))
    assert len(rows) == 25
    assert all(r["agree"] for r in rows)
    assert sum(r["oracle"] == "simple" for r in rows) == 20


def test_sweep_without_oracle():
    A = gl2()
    rows = sweep_rows(zero_spec(A), fp_order(A), oracle=False)
    assert all(r["oracle"] is None and r["agree"] for r in rows)


def test_sweep_regular_semisimple_f25():
    F = Field(5, 2)
    A = make_gl(trivial_bicharacter(GradedGroup([]), F), {(): 2})
    code = next(a for a in range(1, F.q)
                if F.trace_to_prime(F.pow(a, 5)) == 0)
    chi = PCharacter(A, linear={A.index_of("e_11"): code})
    spec = chi_reduce(A, chi)
    rows = sweep_rows(spec, fp_order(A))
    assert len(rows) == 25
    assert all(r["agree"] for r in rows)
    assert all(r["oracle"] == "simple" for r in rows)


# -- the p-power scalar ------------------------------------------------------------


def test_kappa_zero_character_verma():
    A = gl2()
    spec = zero_spec(A)
    M = verma_build(spec, fp_order(A), weight=(3, 1))
    for name in ("e_11", "e_22", "e_12", "e_21"):
        assert extract_kappa(M, A.index_of(name)) == 0


def test_kappa_odd_element_rejected():
    A = gl11()
    M = verma_build(zero_spec(A), fp_order(A), weight=(1, 3))
    with pytest.raises(OddElement):
        extract_kappa(M, A.index_of("e_12"))


def test_kappa_matches_character_over_f25():
    F = Field(5, 2)
    A = make_gl(trivial_bicharacter(GradedGroup([]), F), {(): 2})
    code = next(a for a in range(1, F.q)
                if F.trace_to_prime(F.pow(a, 5)) == 0)
    h11 = A.index_of("e_11")
    spec = chi_reduce(A, PCharacter(A, linear={h11: code}))
    lam = admissible_lambdas(spec)[0]
    M = verma_build(spec, fp_order(A), weight=lam)
    assert extract_kappa(M, h11) == F.pow(code, 5)
    assert extract_kappa(M, A.index_of("e_12")) == 0


def test_kappa_adjoint_gl2():
    # the adjoint module: ad(x) matrices with root-space gradings
    A = gl2()
    spec = zero_spec(A)
    tri = root_datum(A)
    act = {}
    for i in range(A.dim):
        arr = np.zeros((A.dim, A.dim), dtype=np.int64)
        for j in range(A.dim):
            for t, c in A.bracket(i, j).items():
                arr[t, j] = c
        act[i] = Mat.from_codes(F5, arr)
    weights = []
    heights = []
    for j in range(A.dim):
        root = tri.roots.get(j, (0, 0))
        weights.append(tuple(F5.embed(r) for r in root))
        h = tri.heights.get(j, 0)
        heights.append(h if j in tri.neg else -h)
    M = GradedModule(spec, act, weights, [A.group.zero] * A.dim, heights)
    assert extract_kappa(M, A.index_of("e_12")) == 0
    assert extract_kappa(M, A.index_of("e_11")) == 0


def test_kappa_mixed_characters_not_scalar():
    A = line_algebra()
    s1 = chi_reduce(A, PCharacter(A, linear={0: 1}))
    s2 = chi_reduce(A, PCharacter(A, linear={0: 2}))
    r1 = regular_module(s1)["action"][0]
    r2 = regular_module(s2)["action"][0]
    arr = np.zeros((10, 10, F5.k), dtype=np.int64)
    arr[:5, :5] = r1.a
    arr[5:, 5:] = r2.a
    M = GradedModule(s1, {0: Mat(F5, arr)}, [()] * 10,
                     [A.group.zero] * 10, [0] * 10, check=False)
    with pytest.raises(NotScalar):
        extract_kappa(M, 0)


# -- unipotent quotients -----------------------------------------------------------


def test_socle_single_even_letter():
    soc = unipotent_socle(line_algebra())
    assert soc["dimension"] == 5
    assert soc["left"] == [0, 0, 0, 0, 1]  # the line through x^4
    assert soc["left"] == soc["right"]
    assert soc["ratio"] == 1


def test_socle_upper_triangular_gl3():
    A = gl3()
    sub = subalgebra(A, list(root_datum(A).pos))
    soc = unipotent_socle(sub)
    assert soc["dimension"] == 125
    support = [soc["monomials"][t] for t, c in enumerate(soc["left"]) if c]
    assert support == [(4, 4, 4)]
    assert soc["ratio"] == 1


def test_socle_odd_direction():
    A = line_algebra(degree=(1,), orders=(2,), pmap=None)
    soc = unipotent_socle(A)
    assert soc["dimension"] == 2
    assert soc["left"] == [0, 1]  # the line through the odd letter itself


def test_socle_rejects_non_unipotent():
    with pytest.raises(NotUnipotent):
        unipotent_socle(gl2())


def test_simple_quotients_and_isomorphism():
    A = line_algebra()
    spec = chi_reduce(A, PCharacter(A, linear={0: 2}))
    q1 = simple_quotient(spec, seed=1)
    q2 = simple_quotient(spec, seed=2)
    assert q1["dim"] == q2["dim"] == 1
    assert q1["action"][0].entry(0, 0) == 2  # the head acts by chi(x)
    assert q2["action"][0].entry(0, 0) == 2
    iso = module_isomorphism(A, q1, q2)
    assert iso.shape == (1, 1) and iso.entry(0, 0) != 0


def test_simple_quotient_scope():
    A = gl3()
    sub = subalgebra(A, list(root_datum(A).pos))
    with pytest.raises(ValueError, match="abelian"):
        simple_quotient(zero_spec(sub))


def test_non_isomorphic_heads():
    A = line_algebra()
    q1 = simple_quotient(chi_reduce(A, PCharacter(A, linear={0: 1})))
    q2 = simple_quotient(chi_reduce(A, PCharacter(A, linear={0: 2})))
    with pytest.raises(ValueError, match="not isomorphic"):
        module_isomorphism(A, q1, q2)
