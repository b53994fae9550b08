"""Check pipelines over a parsed instance, shared by the command line and the tests."""

from __future__ import annotations

import random
from itertools import product

from .core.linear import Vector
from .gauge import (check_rhs_forms, build_M, build_U, check_Q_ode, check_transported,
                    check_U_ode, check_U_unique, check_Z, integrate_flow, integrate_U,
                    transport_mc)
from .instances import Instance
from .lie import (DerivationSpec, check_adapted, check_derivation, check_phi_related,
                  check_v_morphism, is_maurer_cartan, validate_gla, validate_valgebra)
from .linfty import (CoalgMorphism, Coderivation, check_coalgebra_morphism, check_degrees,
                     check_JD, check_JD2, check_linfty, check_linfty_morphism,
                     check_symmetry, derived_brackets, jacobiator, linear_morphism, words_for)
from .poisson import (check_multiderivation, check_poisson, is_coisotropic, is_flat,
                      pinfty_brackets, rescaling)
from .report import Report
from .symalg import words_to_letters

JACOBI_SAMPLE = 4000


def _triples(inst: Instance):
    """All triples for table algebras; a fixed sample of the window otherwise."""
    keys = inst.V.window
    if len(keys) ** 3 <= JACOBI_SAMPLE:
        return None
    rng = random.Random(len(keys))
    letters = inst.V.a_letters
    sample = [tuple(rng.choice(keys) for _ in range(3)) for _ in range(JACOBI_SAMPLE)]
    return sample + list(product(letters, repeat=3))


def validate_instance(inst: Instance) -> list[Report]:
    V, E = inst.V, inst.E
    reps = [validate_gla(V.gla, V.window, _triples(inst)), validate_valgebra(V)]
    if inst.is_poisson:
        reps.append(check_poisson(V, inst.ctx, inst.pi))
    elif E.ehat is not None:
        rep = check_derivation(V.gla, E.ehat, V.window)
        rep.name = "Ehat derivation"
        reps.append(rep)
    reps.append(check_adapted(V, E))
    ok, witness = is_maurer_cartan(V, E)
    mc = Report("MC", checked=len(V.window))
    if not ok:
        name = V.name(witness) if witness in V.window else witness
        mc.fail(f"E o E != 0 (witness {name})", witness)
    reps.append(mc)
    return reps


def bracket_reports(inst: Instance, nmax: int) -> list[Report]:
    V, E = inst.V, inst.E
    D = derived_brackets(V, E)
    words = words_for(V, nmax)
    reps = [check_symmetry(D, words_for(V, nmax + 1, 2)), check_degrees(D, words_for(V, nmax + 1)),
            check_linfty(D, words), check_JD2(V, E, words)]
    if E.p_element and E.degree % 2:
        reps.append(check_JD(V, E.p_element, words))
    reps.append(pr_square_agreement(D, words))
    if inst.is_poisson:
        reps.extend(poisson_bracket_reports(inst, D, nmax))
    return reps


def pr_square_agreement(D, words) -> Report:
    """Jacobiator and ``pr Q^2`` give the same verdict and the same witnesses."""
    rep = Report("pr Q^2 = J")
    Q = Coderivation(D)
    for w in words:
        rep.count()
        if words_to_letters(Q(Q(Vector.basis(w)))) != jacobiator(D, w):
            rep.fail(f"pr Q^2 and the Jacobiator differ on {w}", w)
    return rep


def poisson_bracket_reports(inst: Instance, D, nmax: int) -> list[Report]:
    V, ctx, pi = inst.V, inst.ctx, inst.pi
    flat, coiso = is_flat(V, pi), is_coisotropic(ctx, pi)
    verdict = Report("flat <=> coisotropic", checked=1,
                     note=f"{'flat' if flat else 'curved'}, "
                          f"{'coisotropic' if coiso else 'not coisotropic'}")
    if flat != coiso:
        verdict.fail("flatness and coisotropy disagree")
    reps = [verdict]
    rng = random.Random(0)
    for n in range(1, min(nmax, 3) + 1):
        reps.append(check_multiderivation(V, D, n, 20, rng))
    if flat:
        rep = Report("D1 o D1")
        for x in V.a_letters:
            rep.count()
            if D(D.raw((x,))):
                rep.fail(f"D1(D1({V.name(x)})) != 0", x)
        reps.append(rep)
    return reps


def flow_reports(inst: Instance, nmax: int, order: int, forms_len: int | None = None) -> list[Report]:
    V, E = inst.V, inst.E
    m = inst.time_derivation(order)
    flow = integrate_flow(m, V)
    E_t = transport_mc(E, flow)
    words = words_for(V, nmax)
    D_m = build_M(V, m)
    U = build_U(V, flow)
    U_int = integrate_U(V, m)
    Q_0 = Coderivation(derived_brackets(V, E))
    Q_t = Coderivation(derived_brackets(V, E_t))
    reps = [flow.check(V, _flow_keys(inst)), check_transported(V, E_t, _flow_keys(inst)),
            check_U_ode(D_m, U, words, order), check_U_unique(U, U_int, words),
            check_Q_ode(V, E_t, m, words, order), check_Z(U, Q_t, Q_0, words, V.degree)]
    forms = Report("right side forms")
    for w in words_for(V, forms_len or nmax, 1):
        forms.merge(check_rhs_forms(D_m, U, w))
    reps.append(forms)
    coalg = check_coalgebra_morphism(CoalgMorphism(U, V.degree), words)
    reps.append(coalg)
    if inst.is_poisson and is_flat(V, inst.pi):
        reps.append(d1_conjugacy(V, E, E_t, U))
    for r in reps:
        if "N=" not in r.note:
            r.note = ", ".join(x for x in (r.note, f"N={order}") if x)
        r.note += f", nmax={nmax}"
    return reps


def _flow_keys(inst: Instance):
    """Keys used for coefficientwise flow checks: the whole basis when finite."""
    if not inst.is_poisson:
        return inst.V.window
    return sorted(set(inst.V.a_letters) | {k for k in inst.V.window if len(k[1]) <= 1})


def d1_conjugacy(V, E, E_t, U) -> Report:
    """For flat structures, ``D1_t o U1 = U1 o D1_0``: the unary operation is
    independent of the embedding up to the induced isomorphism."""
    rep = Report("D1 conjugacy")
    D0, Dt = derived_brackets(V, E), derived_brackets(V, E_t)
    for x in V.a_letters:
        rep.count()
        if Dt(U.raw((x,))) != U(D0.raw((x,))):
            rep.fail(f"D1 is not conjugated by U1 at {V.name(x)}", x)
    return rep


def morphism_reports(inst: Instance, lambdas, nmax: int) -> list[Report]:
    """A rescaling V-morphism and the strict L-infinity morphism it induces."""
    V = inst.V
    phi = rescaling(V.gla, lambdas)
    E2 = DerivationSpec.inner(V.gla, phi(inst.pi), 1)
    U = linear_morphism(phi, V, V)
    words = words_for(V, nmax)
    Q1, Q2 = Coderivation(pinfty_brackets(V, inst.pi)), Coderivation(derived_brackets(V, E2))
    return [check_v_morphism(phi, V, V), check_phi_related(phi, inst.E, E2, V, V),
            check_linfty_morphism(U, Q1, Q2, words)]


def all_ok(reports) -> bool:
    return all(r.ok for r in reports)
