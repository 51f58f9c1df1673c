"""Scenario engine and benchmarks for the payable outsourced-decryption flow.

Each scenario wires the full stack together: an authority issues keys, a
data owner encrypts to the store, a data user outsources a decryption
task on the ledger, a decryption server solves it (honestly or not), and
the optimistic challenge game settles who gets paid.  Scenarios are pure
functions of (name, seed, params): the ledger transaction log replays
bit-identically for the same inputs.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import abe_core, proof_system
from .access_policy import find_coefficients, parse_policy
from .content_store import ContentHash, MemoryStore, TaskData
from .encoding import canonical_decode, canonical_encode
from .group_math import GtElement, RandomTape
from .ledger import Ledger, LedgerParams, TaskState
from .proof_system import (TRANSFORM_RELATION, ProofBundle, Witness, preprocess,
                           prove, statement_digest)

__all__ = [
    "ScenarioResult", "BenchmarkReport", "ScenarioFailure",
    "run_happy_case", "run_challenge_case", "run_self_challenge_case", "bench",
    "SOLVER_STRATEGIES",
]

SOLVER_STRATEGIES = ("honest", "corrupt_T", "random_T")

_DO, _DU, _DCS, _CHALLENGER = "do", "du", "dcs", "challenger"
_FUNDING = Fraction(100)
_REWARD = Fraction(10)


class ScenarioFailure(AssertionError):
    pass


def _require(condition: bool, message: str):
    if not condition:
        raise ScenarioFailure(message)


@dataclass(frozen=True)
class ScenarioResult:
    name: str
    seed: int
    recovered: Optional[bool]      # did the data user get the plaintext back
    payoffs: dict                  # account -> net token change since funding
    task_states: dict              # task id -> final state name
    log: str                       # ledger transaction log
    notes: tuple = ()

    @property
    def log_hash(self) -> str:
        return hashlib.sha256(self.log.encode()).hexdigest()


class _World:
    """Common scenario fixture: keys, store, funded ledger, one open task."""

    def __init__(self, seed: int, n_attrs: int, params: Optional[LedgerParams],
                 reward: Fraction = _REWARD):
        self.tape = RandomTape.from_int(seed)
        self.attrs = [f"attr{i}" for i in range(n_attrs)]
        self.policy = parse_policy(" AND ".join(self.attrs))
        self.reward = reward

        # authority: system setup and the data user's key
        self.pk, self.msk = abe_core.setup(self.tape.fork("setup"))
        self.sk = abe_core.keygen(self.pk, self.msk, self.attrs,
                                  self.tape.fork("keygen"))

        # data owner: hybrid-encrypt the payload into the content store
        self.plaintext = b"payload:" + self.tape.fork("payload").draw_bytes(24)
        self.store = MemoryStore()
        self.pkg = abe_core.hybrid_encrypt(self.pk, self.policy, self.plaintext,
                                           self.tape.fork("encrypt"))

        # data user: blind the key and publish the outsourcing data
        self.tk, self.rk = abe_core.tkgen(self.sk, self.tape.fork("tkgen"))
        self.w = find_coefficients(self.pkg.ct.policy, self.tk.attrs)
        _require(self.w is not None, "policy must be satisfiable in scenarios")
        self.task_data = TaskData(self.pkg.ct, self.tk, self.w)
        self.data_hash = self.store.put(canonical_encode(self.task_data))

        # ledger: fund everyone, stake the server, escrow the task reward
        self.ledger = Ledger(params)
        for account in (_DO, _DU, _DCS, _CHALLENGER):
            self.ledger.mint(account, _FUNDING)
        self.funded = {a: self.ledger.balance(a)
                       for a in (_DO, _DU, _DCS, _CHALLENGER)}
        self.ledger.register_dcs(_DCS, self.ledger.params.min_deposit_dcs)
        self.task_id = self.ledger.create_task(_DU, self.data_hash.digest, reward)

        _, self.vk = preprocess(TRANSFORM_RELATION)
        self.proving_key, _ = preprocess(TRANSFORM_RELATION)

    # -- the decryption server -------------------------------------------

    def solve(self, strategy: str) -> Witness:
        """Fetch the task data and compute T per the given strategy.

        The honest server validates the published coefficients before
        touching the ledger; a malformed w would make its own product
        unprovable later.
        """
        _require(strategy in SOLVER_STRATEGIES, f"unknown strategy {strategy!r}")
        blob = self.store.get(ContentHash(self.ledger.tasks[self.task_id].data_hash))
        data = canonical_decode(TaskData, blob)
        honest = abe_core.transform(data.tk, data.ct, data.w)
        _require(honest is not None, "solver received an unsolvable task")
        t = honest.t
        if strategy == "corrupt_T":
            t = t * self.tape.fork("corrupt").draw_gt()
        elif strategy == "random_T":
            t = self.tape.fork("random").draw_gt()
        witness = Witness(data.ct, data.tk, data.w, t)
        if strategy == "honest":
            _require(proof_system.coefficients_valid(witness),
                     "honest solver must skip tasks with malformed coefficients")
        return witness

    def submit(self, witness: Witness):
        statement = statement_digest(witness.ct, witness.tk, witness.w, witness.t)
        self.ledger.submit_result(_DCS, self.task_id, statement, witness.t)

    def respond(self, witness: Witness) -> bool:
        statement = statement_digest(witness.ct, witness.tk, witness.w, witness.t)
        bundle = prove(self.proving_key, statement, witness)
        return self.ledger.respond(_DCS, self.task_id, bundle, self.vk)

    # -- the data user ----------------------------------------------------

    def try_decrypt(self) -> Optional[bytes]:
        """Finish decryption from the submitted T; None on authentication failure."""
        t = self.ledger.tasks[self.task_id].t
        m = abe_core.retrieve(abe_core.TransformedCiphertext(self.pkg.ct.c, t),
                              self.rk)
        try:
            return abe_core.hybrid_decrypt(self.pkg, m)
        except abe_core.AuthenticationError:
            return None

    # -- bookkeeping ------------------------------------------------------

    def payoffs(self) -> dict:
        out = {a: self.ledger.balance(a) - self.funded[a] for a in self.funded}
        for name, rec in self.ledger.dcs.items():
            if name in out:
                out[name] += rec.staked
        return out

    def finish(self, name: str, seed: int, recovered: Optional[bool],
               notes: tuple = ()) -> ScenarioResult:
        _require(self.ledger.total_supply() == self.ledger.minted(),
                 "token conservation violated")
        states = {tid: t.state.value for tid, t in self.ledger.tasks.items()}
        _require(all(t.state in (TaskState.FINALIZED, TaskState.SLASHED)
                     for t in self.ledger.tasks.values()),
                 "scenario ended with non-terminal tasks")
        return ScenarioResult(name, seed, recovered, self.payoffs(), states,
                              self.ledger.export_log(), notes)


def run_happy_case(n_attrs: int = 5, seed: int = 0,
                   params: Optional[LedgerParams] = None) -> ScenarioResult:
    """Unchallenged flow: solve, submit, wait out the window, claim, decrypt."""
    w = _World(seed, n_attrs, params)
    witness = w.solve("honest")
    w.submit(witness)
    w.ledger.advance_time(w.ledger.params.t_cw + 1)
    w.ledger.claim_task_reward(_DCS, w.task_id)
    plaintext = w.try_decrypt()
    _require(plaintext == w.plaintext, "data user failed to recover the plaintext")
    result = w.finish("happy", seed, True)
    _require(result.payoffs[_DCS] == w.reward, "solver did not net the reward")
    _require(result.payoffs[_DU] == -w.reward, "data user paid other than the reward")
    return result


def run_challenge_case(solver_strategy: str = "corrupt_T", n_attrs: int = 5,
                       seed: int = 0,
                       params: Optional[LedgerParams] = None) -> ScenarioResult:
    """Disputed flow.

    honest: a spurious external challenger loses its stake to the solver.
    corrupt_T / random_T: the data user detects the bad result through
    authentication failure, challenges, every response attempt is
    rejected, and the solver is slashed.
    """
    w = _World(seed, n_attrs, params)
    witness = w.solve(solver_strategy)
    w.submit(witness)
    stake = w.ledger.params.min_deposit_challenger
    fine = w.ledger.params.min_deposit_dcs
    split = w.ledger.params.slash_split_challenger

    if solver_strategy == "honest":
        w.ledger.challenge(_CHALLENGER, w.task_id, stake)
        _require(w.respond(witness), "honest response must verify")
        w.ledger.claim_task_reward(_DCS, w.task_id)
        plaintext = w.try_decrypt()
        _require(plaintext == w.plaintext, "data user failed to recover plaintext")
        result = w.finish("challenge-honest", seed, True)
        _require(result.payoffs[_CHALLENGER] == -stake,
                 "failed challenger must lose exactly its stake")
        _require(result.payoffs[_DCS] == w.reward + stake,
                 "defending solver must net reward plus challenger stake")
        return result

    plaintext = w.try_decrypt()
    _require(plaintext is None, "bad result must fail authentication at the user")
    w.ledger.challenge(_DU, w.task_id, stake)
    rejected = 0
    for _ in range(2):
        if not w.respond(witness):
            rejected += 1
    _require(rejected == 2, "no proof for a wrong T may verify")
    w.ledger.advance_time(w.ledger.params.t_rw + 1)
    w.ledger.claim_challenge_reward(_DU, w.task_id)
    result = w.finish(f"challenge-{solver_strategy}", seed, False,
                      notes=(f"respond rejected {rejected} times",))
    _require(result.payoffs[_DCS] == -fine, "cheating solver must lose the fine")
    # the data user is both creator and challenger here, so it collects
    # the challenger share and the compensation share of the fine
    _require(result.payoffs[_DU] == fine * split + fine * (1 - split),
             "data user must recoup reward plus the full fine")
    _require(result.payoffs[_DU] >= 0, "data user must not end up out of pocket")
    return result


def run_self_challenge_case(n_attrs: int = 5, seed: int = 0,
                            params: Optional[LedgerParams] = None) -> ScenarioResult:
    """Solver challenges its own submission in both branches.

    Against the no-challenge baseline the honest branch nets zero (the
    returned stake only refunds itself) and the corrupt branch is
    strictly negative (half the solver's own fine flows to the data
    user), so self-challenging is never profitable.
    """
    payoffs = {}

    # branch A: honest result, solver disputes itself, then exonerates itself
    w = _World(seed, n_attrs, params)
    witness = w.solve("honest")
    w.submit(witness)
    stake = w.ledger.params.min_deposit_challenger
    w.ledger.mint(_DCS, stake)          # stake funding, excluded from payoff
    w.funded[_DCS] += stake
    w.ledger.challenge(_DCS, w.task_id, stake)
    _require(w.respond(witness), "self-response with honest T must verify")
    w.ledger.claim_task_reward(_DCS, w.task_id)
    honest_result = w.finish("self-challenge-honest", seed, True)
    baseline = run_happy_case(n_attrs, seed, params).payoffs[_DCS]
    payoffs["honest_vs_no_challenge"] = honest_result.payoffs[_DCS] - baseline

    # branch B: corrupt result, solver disputes itself and wins as challenger
    w = _World(seed, n_attrs, params)
    witness = w.solve("corrupt_T")
    w.submit(witness)
    w.ledger.mint(_DCS, stake)
    w.funded[_DCS] += stake
    w.ledger.challenge(_DCS, w.task_id, stake)
    w.ledger.advance_time(w.ledger.params.t_rw + 1)
    w.ledger.claim_challenge_reward(_DCS, w.task_id)
    corrupt_result = w.finish("self-challenge-corrupt", seed, False)
    # unchallenged corruption would have paid the full reward
    payoffs["corrupt_vs_no_challenge"] = corrupt_result.payoffs[_DCS] - baseline

    for branch, delta in payoffs.items():
        _require(delta <= 0, f"self-challenge branch {branch} must not profit")
    return ScenarioResult(
        "self-challenge", seed, None,
        {k: v for k, v in payoffs.items()},
        {**{f"honest:{k}": v for k, v in honest_result.task_states.items()},
         **{f"corrupt:{k}": v for k, v in corrupt_result.task_states.items()}},
        honest_result.log + corrupt_result.log,
        notes=("payoffs are deltas against the no-challenge baseline",))


_BENCH_ALGS = ("keygen", "encapsulate", "tkgen", "transform", "retrieve")


@dataclass
class BenchmarkReport:
    """Per-algorithm timing samples keyed by attribute count."""

    grid: tuple
    reps: int
    samples: dict = field(default_factory=dict)  # alg -> {n -> [seconds]}

    def mean(self, alg: str, n: int) -> float:
        values = self.samples[alg][n]
        return sum(values) / len(values)

    def to_csv(self) -> str:
        lines = ["n_attrs,algorithm,rep,seconds"]
        for alg in _BENCH_ALGS:
            for n in self.grid:
                for rep, s in enumerate(self.samples[alg][n]):
                    lines.append(f"{n},{alg},{rep},{s:.9f}")
        return "\n".join(lines) + "\n"

    def to_table(self) -> str:
        header = "n_attrs " + "".join(f"{alg:>14}" for alg in _BENCH_ALGS)
        lines = [header, "-" * len(header)]
        for n in self.grid:
            cells = "".join(f"{self.mean(alg, n) * 1e3:>12.2f}ms"
                            for alg in _BENCH_ALGS)
            lines.append(f"{n:>7} {cells}")
        return "\n".join(lines) + "\n"

    def write(self, out_dir: str | Path):
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "bench.csv").write_text(self.to_csv())
        (out / "bench.txt").write_text(self.to_table())


def bench(grid=tuple(range(5, 65, 5)), reps: int = 100, seed: int = 0,
          out_dir: Optional[str | Path] = None) -> BenchmarkReport:
    """Time each algorithm per attribute count; policy is an all-AND chain."""
    grid = tuple(grid)
    report = BenchmarkReport(grid, reps,
                             {alg: {n: [] for n in grid} for alg in _BENCH_ALGS})
    tape = RandomTape.from_int(seed)
    pk, msk = abe_core.setup(tape.fork("setup"))
    for n in grid:
        attrs = [f"attr{i}" for i in range(n)]
        policy = parse_policy(" AND ".join(attrs))
        for rep in range(reps):
            rt = tape.fork(f"bench:{n}:{rep}")
            clock = time.perf_counter

            t0 = clock()
            sk = abe_core.keygen(pk, msk, attrs, rt)
            t1 = clock()
            ct, m = abe_core.encapsulate(pk, policy, rt)
            t2 = clock()
            tk, rk = abe_core.tkgen(sk, rt)
            t3 = clock()
            w = find_coefficients(ct.policy, tk.attrs)
            t4 = clock()
            tct = abe_core.transform(tk, ct, w)
            t5 = clock()
            recovered = abe_core.retrieve(tct, rk)
            t6 = clock()

            assert recovered == m
            report.samples["keygen"][n].append(t1 - t0)
            report.samples["encapsulate"][n].append(t2 - t1)
            report.samples["tkgen"][n].append(t3 - t2)
            report.samples["transform"][n].append(t5 - t4)
            report.samples["retrieve"][n].append(t6 - t5)
    if out_dir is not None:
        report.write(out_dir)
    return report
