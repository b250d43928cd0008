"""Property runner over a catalog of algebras and all pairs of them.

Each algebra job and each pair job is a pure function of picklable inputs,
so both stages can fan out over a process pool.  Results are sorted by
input digest before assembly, which keeps reports independent of worker
scheduling.
"""
from __future__ import annotations

import itertools
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

from .. import abelian, canonical, env, isotest, liealg
from .. import linalg as la
from ..errors import ReslieError
from ..liealg import AlgebraPresentation, verify_isomorphism
from . import fileformat
from .report import digest_text, jsonable

DEFAULT_TRIALS = 100
PRUNE_CHECK_MAX_DIM = 3


@dataclass
class Check:
    module: str
    prop: str
    ok: bool
    witness: object = None
    subject: str = ""

    def to_dict(self) -> dict:
        d = {"module": self.module, "property": self.prop, "ok": self.ok, "subject": self.subject}
        if self.witness is not None:
            d["witness"] = jsonable(self.witness)
        return d


@dataclass
class Recorder:
    subject: str
    checks: list = dc_field(default_factory=list)

    def run(self, module: str, prop: str, fn):
        """fn() returns ok or (ok, witness); exceptions become failures."""
        try:
            out = fn()
        except Exception as exc:  # a crash inside a check is a failed check
            self.checks.append(Check(module, prop, False, {"error": f"{type(exc).__name__}: {exc}"}, self.subject))
            return None
        ok, witness = out if isinstance(out, tuple) else (out, None)
        self.checks.append(Check(module, prop, bool(ok), None if ok else witness, self.subject))
        return ok


def _witness_audit(rec: Recorder, extra=()):
    """Replay every witness produced during the job, then clear the log."""
    wits = list(isotest.EMITTED_WITNESSES) + list(extra)
    isotest.EMITTED_WITNESSES.clear()
    bad = [w.matrix for w in wits if not verify_isomorphism(w.source, w.target, w.matrix)]
    rec.run("isotest", "witness_replay", lambda: (not bad, {"failed": bad}))
    return len(wits), len(bad)


# -- per-algebra properties ----------------------------------------------------

def _exactla_checks(rec: Recorder, P: AlgebraPresentation):
    F = P.field
    spaces = liealg.lower_central_series(P) + liealg.dimension_series(P)
    rec.run("exactla", "rref_canonical",
            lambda: all(la.rref(F, list(S.basis), S.ambient_dim)[0] == S for S in spaces))

    def modular():
        for A, B in itertools.product(spaces, repeat=2):
            if (A + B).dim + A.intersect(B).dim != A.dim + B.dim:
                return False, {"dims": [A.dim, B.dim]}
        return True

    rec.run("exactla", "modular_law", modular)

    def linear_vs_semilinear():
        for i in range(P.dim):
            T = liealg.ad_matrix(P, P.basis_vector(i))
            for S in spaces:
                img = la.Subspace.span(F, P.dim, (la.mat_vec(F, T, v) for v in S.basis))
                if la.semilinear_image(F, T, 0, S) != img:
                    return False, {"basis_index": i}
        return True

    rec.run("exactla", "semilinear_e0_is_linear", linear_vs_semilinear)


def _liealg_checks(rec: Recorder, P: AlgebraPresentation, U, omega_cap):
    F, n = P.field, P.dim
    rec.run("liealg", "validates", lambda: (liealg.validate_presentation(P).ok,
                                             liealg.validate_presentation(P).violations))

    def ad_compat():
        for i in range(n):
            b = P.basis_vector(i)
            lhs = liealg.ad_matrix(P, liealg.p_power(P, b))
            rhs = la.mat_pow(F, liealg.ad_matrix(P, b), P.p)
            if lhs != rhs:
                return False, {"basis_index": i}
        return True

    rec.run("liealg", "ad_of_p_power", ad_compat)
    gammas = liealg.lower_central_series(P)
    series = liealg.dimension_series(P)
    rec.run("liealg", "chains_descend", lambda: (
        all(b <= a for a, b in zip(gammas, gammas[1:]))
        and all(b <= a for a, b in zip(series, series[1:]))
        and series[0] == P.full()))
    rec.run("liealg", "gamma2_is_bracket_space", lambda: len(gammas) < 2 or
            gammas[1] == liealg.bracket_space(P, P.full(), P.full()))

    def formula_vs_oracle():
        idx = U.nilpotency_index()
        top = idx if idx != math.inf else max(len(U.omega_chain()) + 1, liealg.stable_index(P) + 1)
        if omega_cap:
            top = min(top, omega_cap)
        for k in range(1, top + 1):
            a, b = liealg.dimension_subalgebra(P, k), env.dimension_subalgebra_oracle(U, k)
            if a != b:
                return False, {"n": k, "formula": a.basis, "oracle": b.basis}
        return True

    rec.run("liealg", "dimension_formula_equals_oracle", formula_vs_oracle)

    def d_terms_are_restricted_ideals():
        for S in series:
            liealg.RestrictedIdeal(P, S)
        return True

    rec.run("liealg", "dimension_subalgebras_are_restricted_ideals", d_terms_are_restricted_ideals)

    def quotients_validate():
        ideals = {"derived_p": liealg.derived_p(P), "main": liealg.main_ideal(P),
                  "center": liealg.center(P), "D2": liealg.dimension_subalgebra(P, 2)}
        for label, I in ideals.items():
            Q = liealg.quotient(P, I)
            if not liealg.validate_presentation(Q).ok or Q.dim != n - I.dim:
                return False, {"ideal": label}
        return True

    rec.run("liealg", "quotients_validate", quotients_validate)
    pn = liealg.is_p_nilpotent(P)
    rec.run("env", "p_nilpotent_iff_omega_nilpotent",
            lambda: (pn == (U.nilpotency_index() != math.inf),
                     {"p_nilpotent": pn, "omega_index": U.nilpotency_index()}))
    if not pn:
        return
    G = liealg.graded_data(P)
    gr = G.algebra

    def graded_dims():
        if gr.dim != n or not liealg.validate_presentation(gr).ok:
            return False, {"gr_dim": gr.dim}
        m = len(series)

        def D(i):
            return series[i - 1] if i <= m else P.zero_space()

        ggr = liealg.lower_central_series(gr)
        for k in range(1, m + 1):
            # the gamma identity needs k >= 2: at k = 1 gr(L) also has
            # classes coming only from p-powers
            want = sum((gammas[i - 1] + D(i + 1)).dim - D(i + 1).dim
                       for i in range(k, m + 1) if i <= len(gammas))
            got = ggr[k - 1].dim if k <= len(ggr) else 0
            if k >= 2 and want != got:
                return False, {"gamma_index": k, "expected": want, "got": got}
            dgr = liealg.dimension_subalgebra(gr, k).dim
            if dgr != D(k).dim:
                return False, {"d_index": k, "expected": D(k).dim, "got": dgr}
        return True

    rec.run("liealg", "graded_dimensions", graded_dims)
    rec.run("liealg", "graded_idempotent", lambda: canonical.canonical_id(liealg.graded(gr)) ==
            canonical.canonical_id(gr))


def _abelian_checks(rec: Recorder, P: AlgebraPresentation, rng, trials):
    if not P.is_abelian:
        return
    F, n = P.field, P.dim
    S = abelian.as_semilinear(P)

    def fitting():
        fd = abelian.fitting_decomposition(P)
        ok = (fd.invertible_part.dim + fd.nil_part.dim == n
              and abelian.is_bijective_on(S, fd.invertible_part)
              and abelian.is_nilpotent_on(S, fd.nil_part)
              and fd.nil_part == abelian.rad(P))
        return ok, {"invertible": fd.invertible_part.basis, "nil": fd.nil_part.basis}

    rec.run("abelian", "fitting_split", fitting)
    if not liealg.is_p_nilpotent(P):
        return
    exps = abelian.exponent_multiset(P)
    rec.run("abelian", "partition_conjugation",
            lambda: (list(exps) == abelian.partition_from_profile(abelian.rank_profile(S)),
                     {"exponents": exps, "profile": abelian.rank_profile(S)}))

    def invariance():
        for t in range(trials):
            Q = liealg.change_basis(P, la.random_invertible(F, n, rng))
            if abelian.exponent_multiset(Q) != exps:
                return False, {"trial": t, "presentation": fileformat.serialize(Q)}
        return True

    rec.run("abelian", "exponents_basis_invariant", invariance)

    def reassembly():
        ok, w = abelian.abelian_iso(P, abelian.cyclic_algebra(F, exps))
        return ok and w is not None and w.verify()

    rec.run("abelian", "reassembly_isomorphic", reassembly)


def _env_checks(rec: Recorder, P: AlgebraPresentation, U, rng):
    F, n = P.field, P.dim
    rec.run("env", "pbw_dimension", lambda: (U.dim == P.p ** n, {"dim": U.dim}))

    def embedding():
        for i in range(n):
            for j in range(n):
                c = U.commutator(U.gen(j), U.gen(i))
                if c != U.embed(liealg.bracket(P, P.basis_vector(j), P.basis_vector(i))):
                    return False, {"pair": [j, i]}
            if U.power(U.gen(i), P.p) != U.embed(P.pmap[i]):
                return False, {"p_power_of": i}
        return True

    rec.run("env", "restricted_embedding", embedding)

    def associativity():
        mons = U.monomial_elements()
        for _ in range(25):
            a, b, c = (rng.choice(mons) for _ in range(3))
            if U.mul(U.mul(a, b), c) != U.mul(a, U.mul(b, c)):
                return False, {"a": U.format(a), "b": U.format(b), "c": U.format(c)}
        return True

    rec.run("env", "associativity_spot_check", associativity)

    def nu_identity():
        subs = {"zero": P.zero_space(), "center": liealg.center(P),
                "derived_p": liealg.derived_p(P), "L": P.full()}
        for label, N in subs.items():
            lhs, rhs = env.n_quotient_dims(U, N)
            a, b = env.nu_intersection(U, N)
            if lhs != rhs or a != b:
                return False, {"N": label, "dims": [lhs, rhs]}
        return True

    rec.run("env", "n_ideal_quotient_identity", nu_identity)
    rec.run("env", "jl_from_derived_or_derived_p", lambda: env.jl_subspace(U, check=True) is not None)
    if not liealg.is_p_nilpotent(P):
        rec.run("env", "centrality_refuses_without_p_nilpotence", _refuses(lambda: env.verify_e_centrality(U)))
        return
    J = env.jl_subspace(U, check=False)

    def weight_basis():
        Z, weights = env.weighted_basis(P)
        top = U.nilpotency_index()
        for k in range(1, top + 1):
            count = env.weight_count(weights, P.p, k)
            space = env.weighted_monomial_space(U, Z, weights, k)
            if count != U.augmentation_power(k).dim or space != U.augmentation_power(k):
                return False, {"k": k, "count": count, "omega_dim": U.augmentation_power(k).dim}
        return True

    rec.run("env", "weighted_monomials_span_omega_powers", weight_basis)

    def decomposition():
        chk = env.check_e_decomposition(U, J=J)
        return chk.ok, {"parts": [chk.omega_is_L_plus_E, chk.L_plus_J_meet_E_is_J,
                                  chk.E_meet_Lp_u_is_J, chk.direct_sum_mod_J], "dims": chk.dims}

    rec.run("env", "e_decomposition", decomposition)

    def centrality():
        rep = env.verify_e_centrality(U, J=J)
        return rep.ok, rep.violations

    rec.run("env", "e_central_and_p_closed", centrality)

    def l_meet_j():
        meet = U.lie_subspace(P.full()).intersect(J)
        got = P.span(U.to_lie(v) for v in meet.basis)
        gammas = liealg.lower_central_series(P)
        g2 = gammas[1] if len(gammas) > 1 else P.zero_space()
        want = liealg.bracket_space(P, g2, P.full()) + liealg.power_p_subalgebra(P, g2)
        return got == want, {"meet": got.basis, "expected": want.basis}

    rec.run("env", "L_meet_JL_is_gamma3_plus_derived_p_power", l_meet_j)

    def graded_omega():
        return (env.PBWAlgebra(liealg.graded(P)).omega_dims() == U.omega_dims(),
                {"graded": env.PBWAlgebra(liealg.graded(P)).omega_dims(), "L": U.omega_dims()})

    rec.run("env", "graded_envelope_filtration_dims", graded_omega)

    M = la.random_invertible(F, n, rng)
    Q = liealg.change_basis(P, M)
    V = env.PBWAlgebra(Q)

    def filtration_transport():
        _, image = env.induced_map(U, V, M)
        for k in range(1, U.nilpotency_index() + 1):
            if image(env.filtration_piece(V, k)) != env.filtration_piece(U, k):
                return False, {"n": k}
        return True

    rec.run("env", "dn_plus_omega_basis_invariant", filtration_transport)
    rec.run("env", "fingerprint_basis_invariant",
            lambda: (env.fingerprint(P, U) == env.fingerprint(Q, V), {"matrix": M}))


def _refuses(fn):
    def run():
        try:
            fn()
        except ReslieError:
            return True
        return False, {"error": "operation accepted a non-p-nilpotent algebra"}
    return run


def _isotest_checks(rec: Recorder, P: AlgebraPresentation, rng, budget):
    F, n = P.field, P.dim
    if F.q ** n > canonical.ENUM_LIMIT:
        return
    rec.run("isotest", "self_isomorphism_found",
            lambda: isotest.lie_iso_search(P, P, budget).status == isotest.ISOMORPHIC)
    Q = liealg.change_basis(P, la.random_invertible(F, n, rng))
    rec.run("isotest", "rebased_copy_isomorphic",
            lambda: isotest.lie_iso_search(P, Q, budget).status == isotest.ISOMORPHIC)
    if isotest.env_search_feasible(P, budget):
        rec.run("isotest", "env_search_finds_self",
                lambda: isotest.env_generator_iso_search(P, P, budget).status == isotest.FOUND)


@dataclass
class AlgebraResult:
    name: str
    digest: str
    algebra: AlgebraPresentation
    checks: list
    facts: dict
    fingerprint: object = None
    witnesses: int = 0

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "digest": self.digest,
            "facts": self.facts,
            "fingerprint": self.fingerprint.to_dict() if self.fingerprint is not None else None,
            "checks": [c.to_dict() for c in self.checks],
        }


def algebra_facts(P: AlgebraPresentation, U=None) -> dict:
    pn = liealg.is_p_nilpotent(P)
    nil = liealg.is_nilpotent(P)
    facts = {
        "dim": P.dim,
        "abelian": P.is_abelian,
        "p_nilpotent": pn,
        "nilpotent": nil,
        "class": liealg.nilpotence_class(P) if nil else None,
        "gamma_dims": [g.dim for g in liealg.lower_central_series(P)],
        "d_dims": [d.dim for d in liealg.dimension_series(P)],
        "derived_p_dim": liealg.derived_p(P).dim,
        "class_id": canonical.canonical_id(P),
    }
    if U is not None:
        facts["omega_dims"] = U.omega_dims()
        facts["omega_nilpotency_index"] = U.nilpotency_index()
    if P.is_abelian:
        if pn:
            facts["exponents"] = list(abelian.exponent_multiset(P))
        fd = abelian.fitting_decomposition(P)
        facts["fitting"] = {"invertible_dim": fd.invertible_part.dim, "nil_dim": fd.nil_part.dim,
                            "toral_spanned": fd.toral_spanned}
    return facts


def algebra_job(args) -> AlgebraResult:
    name, P, seed, trials, budget, omega_cap = args
    text = fileformat.serialize(P)
    rng = random.Random(seed)
    rec = Recorder(name)
    U = env.PBWAlgebra(P)
    _exactla_checks(rec, P)
    _liealg_checks(rec, P, U, omega_cap)
    _abelian_checks(rec, P, rng, trials)
    _env_checks(rec, P, U, rng)
    _isotest_checks(rec, P, rng, budget)
    rec.run("workbench", "round_trip", lambda: fileformat.serialize(fileformat.parse(text)) == text)
    fp = None
    if liealg.is_p_nilpotent(P):
        fp = env.fingerprint(P, U)
    facts = algebra_facts(P, U)
    count, _ = _witness_audit(rec)
    return AlgebraResult(name, digest_text(text), P, rec.checks, facts, fp, count)


# -- pairwise properties -------------------------------------------------------

@dataclass
class PairResult:
    names: tuple
    digests: tuple
    checks: list
    outcome: str | None = None
    iso_status: str | None = None
    witnesses: int = 0

    def to_dict(self) -> dict:
        return {
            "pair": list(self.names),
            "digests": list(self.digests),
            "consistency": self.outcome,
            "lie_iso": self.iso_status,
            "checks": [c.to_dict() for c in self.checks],
        }


def pair_job(args) -> PairResult:
    a, b, budget = args  # two AlgebraResult records
    P, Q = a.algebra, b.algebra
    rec = Recorder(f"{a.name} | {b.name}")
    out = PairResult((a.name, b.name), (a.digest, b.digest), rec.checks)
    same_field = P.field == Q.field
    extra = []
    if same_field and P.dim == Q.dim and P.field.q ** P.dim <= canonical.ENUM_LIMIT:
        res = isotest.lie_iso_search(P, Q, budget)
        out.iso_status = res.status
        if res.status == isotest.ISOMORPHIC and a.fingerprint is not None:
            rec.run("env", "fingerprint_iso_invariant", lambda: (a.fingerprint == b.fingerprint,
                    {"differs": a.fingerprint.differences(b.fingerprint)}))
        if res.status == isotest.ISOMORPHIC:
            rec.run("isotest", "class_ids_agree_on_isomorphic",
                    lambda: a.facts["class_id"] == b.facts["class_id"])
        elif res.status == isotest.NOT_ISOMORPHIC:
            rec.run("isotest", "complete_ids_differ_on_non_isomorphic",
                    lambda: not (canonical.is_complete_id(a.facts["class_id"])
                                 and a.facts["class_id"] == b.facts["class_id"]))
        if P.is_abelian and Q.is_abelian and a.facts["p_nilpotent"] and b.facts["p_nilpotent"]:
            ok_pq, w = abelian.abelian_iso(P, Q)
            ok_qp, w2 = abelian.abelian_iso(Q, P)
            extra.extend(x for x in (w, w2) if x is not None)
            rec.run("abelian", "abelian_iso_symmetric", lambda: ok_pq == ok_qp)
            if res.conclusive:
                rec.run("isotest", "agrees_with_abelian_iso",
                        lambda: (ok_pq == (res.status == isotest.ISOMORPHIC),
                                 {"abelian_iso": ok_pq, "search": res.status}))
        if P.field.q == 2 and P.dim <= PRUNE_CHECK_MAX_DIM:
            raw = isotest.lie_iso_search(P, Q, budget, prune=False)
            if res.conclusive and raw.conclusive:
                rec.run("isotest", "pruning_is_conservative",
                        lambda: (raw.status == res.status, {"pruned": res.status, "unpruned": raw.status}))
    if same_field and a.fingerprint is not None and b.fingerprint is not None:
        rep = isotest.main_theorem_consistency(P, Q, budget, a.fingerprint, b.fingerprint)
        out.outcome = rep.outcome
        rec.run("isotest", "no_candidate_violation",
                lambda: (rep.outcome != isotest.CANDIDATE_VIOLATION, rep.as_dict()))
        if a.fingerprint.gr_class_id == b.fingerprint.gr_class_id:
            ca, cb = a.facts["class"], b.facts["class"]
            rec.run("liealg", "equal_graded_class_within_one",
                    lambda: (abs(ca - cb) <= 1, {"classes": [ca, cb]}))
    out.witnesses, _ = _witness_audit(rec, extra)
    return out


# -- runner --------------------------------------------------------------------

@dataclass
class VerifyOutcome:
    algebras: list
    pairs: list

    @property
    def failures(self) -> list:
        return [c for r in self.algebras + self.pairs for c in r.checks if not c.ok]

    @property
    def candidate_violations(self) -> list:
        return [p for p in self.pairs if p.outcome == isotest.CANDIDATE_VIOLATION]

    @property
    def ok(self) -> bool:
        return not self.failures and not self.candidate_violations

    def summary(self) -> dict:
        props: dict = {}
        for r in self.algebras + self.pairs:
            for c in r.checks:
                key = f"{c.module}.{c.prop}"
                s = props.setdefault(key, {"passed": 0, "failed": 0})
                s["passed" if c.ok else "failed"] += 1
        outcomes: dict = {}
        for p in self.pairs:
            if p.outcome is not None:
                outcomes[p.outcome] = outcomes.get(p.outcome, 0) + 1
        return {
            "algebras": len(self.algebras),
            "pairs": len(self.pairs),
            "properties": props,
            "consistency_outcomes": outcomes,
            "witnesses_replayed": sum(r.witnesses for r in self.algebras + self.pairs),
            "failures": len(self.failures),
            "candidate_violations": len(self.candidate_violations),
            "ok": self.ok,
        }

    def to_dict(self) -> dict:
        return {
            "summary": self.summary(),
            "failures": [c.to_dict() for c in self.failures],
            "algebras": [r.to_dict() for r in self.algebras],
            "pairs": [p.to_dict() for p in self.pairs],
        }


def _map(fn, items, jobs):
    if jobs <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def run_catalog(algebras: dict, jobs: int = 1, trials: int = DEFAULT_TRIALS,
                budget: int = isotest.DEFAULT_BUDGET, omega_cap: int | None = None,
                seed: int = 0) -> VerifyOutcome:
    """Per-algebra checks for every entry, then pair checks for all pairs."""
    names = sorted(algebras)
    args = [(nm, algebras[nm], seed + i, trials, budget, omega_cap) for i, nm in enumerate(names)]
    results = sorted(_map(algebra_job, args, jobs), key=lambda r: (r.digest, r.name))
    pairs = [(a, b, budget) for a, b in itertools.combinations(results, 2)]
    pair_results = sorted(_map(pair_job, pairs, jobs), key=lambda r: (r.digests, r.names))
    return VerifyOutcome(results, pair_results)
