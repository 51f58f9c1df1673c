"""Deterministic simulated blockchain hosting the payable-decryption contract.

Accounts hold exact token amounts (fractions, never floats).  Decryption
servers stake to register, solve tasks for escrowed rewards, and face an
optimistic challenge game: anyone may stake and dispute a submitted
result inside the challenge window; the solver must then respond with an
accepting proof inside the response window or be slashed.

All mutation goes through named operations that append to a transaction
log (op, caller, arguments, resulting state hash), so a fixed operation
order replays to a bit-identical history.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional

from . import proof_system
from .group_math import GtElement
from .proof_system import ProofBundle, Statement, VerifyingKey

__all__ = [
    "LedgerParams", "Clock", "DcsRecord", "Task", "TaskState", "Ledger",
    "LedgerError", "InsufficientBalanceError", "InsufficientDepositError",
    "InsufficientStakeError", "AlreadyRegisteredError", "NotRegisteredError",
    "PendingTasksError", "UnknownTaskError", "WrongStateError",
    "WrongCallerError", "WindowClosedError", "WindowOpenError",
    "ZeroRewardError",
]


class LedgerError(Exception):
    pass


class InsufficientBalanceError(LedgerError):
    pass


class InsufficientDepositError(LedgerError):
    pass


class InsufficientStakeError(LedgerError):
    pass


class AlreadyRegisteredError(LedgerError):
    pass


class NotRegisteredError(LedgerError):
    pass


class PendingTasksError(LedgerError):
    pass


class UnknownTaskError(LedgerError):
    pass


class WrongStateError(LedgerError):
    pass


class WrongCallerError(LedgerError):
    pass


class WindowClosedError(LedgerError):
    pass


class WindowOpenError(LedgerError):
    pass


class ZeroRewardError(LedgerError):
    pass


@dataclass(frozen=True)
class LedgerParams:
    """Protocol constants: window lengths in ticks, stakes in tokens.

    The slashing fine equals min_deposit_dcs; slash_split_challenger of
    the fine goes to the challenger, the rest compensates the task
    creator.
    """

    t_cw: int = 100
    t_rw: int = 50
    min_deposit_dcs: Fraction = Fraction(5)
    min_deposit_challenger: Fraction = Fraction(1)
    slash_split_challenger: Fraction = Fraction(1, 2)

    def __post_init__(self):
        if self.t_cw < 1 or self.t_rw < 1:
            raise ValueError("windows must be at least one tick")
        if self.min_deposit_dcs <= 0 or self.min_deposit_challenger <= 0:
            raise ValueError("minimum deposits must be positive")
        if not 0 <= self.slash_split_challenger <= 1:
            raise ValueError("slash split must lie in [0, 1]")

    @classmethod
    def from_file(cls, path: str | Path) -> "LedgerParams":
        """Load from a plain-text key=value file; '#' starts a comment."""
        values = {}
        for raw in Path(path).read_text().splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key in ("t_cw", "t_rw"):
                values[key] = int(value)
            elif key in ("min_deposit_dcs", "min_deposit_challenger",
                         "slash_split_challenger"):
                values[key] = Fraction(value)
            else:
                raise ValueError(f"unknown parameter {key!r}")
        return cls(**values)


class Clock:
    """Monotone tick counter; nothing happens implicitly as time passes."""

    def __init__(self, now: int = 0):
        self.now = now

    def advance(self, ticks: int):
        if ticks < 0:
            raise ValueError("clock cannot run backwards")
        self.now += ticks


class TaskState(Enum):
    CREATED = "created"
    SUBMITTED = "submitted"
    CHALLENGED = "challenged"
    RESPONDED = "responded"
    FINALIZED = "finalized"
    SLASHED = "slashed"


_TERMINAL = frozenset({TaskState.FINALIZED, TaskState.SLASHED})


@dataclass
class DcsRecord:
    id: str
    staked: Fraction
    pending_tasks: set = field(default_factory=set)


@dataclass
class Task:
    id: int
    creator: str
    data_hash: bytes
    reward: Fraction
    state: TaskState = TaskState.CREATED
    statement: Optional[Statement] = None
    t: Optional[GtElement] = None
    solver: Optional[str] = None
    challenger: Optional[str] = None
    challenger_stake: Fraction = Fraction(0)
    submitted_at: Optional[int] = None
    challenged_at: Optional[int] = None


class Ledger:
    """Single serialized transaction log over accounts, stakes, and tasks.

    ``verify_fn`` decides challenge responses; it defaults to the dispute
    proof verifier and is injectable so state-machine tests can drive
    both settlement branches without building real proofs.
    """

    def __init__(self, params: Optional[LedgerParams] = None,
                 verify_fn: Optional[Callable[[VerifyingKey, Statement,
                                               ProofBundle | bytes], bool]] = None):
        self.params = params or LedgerParams()
        self.clock = Clock()
        self.balances: dict[str, Fraction] = {}
        self.dcs: dict[str, DcsRecord] = {}
        self.tasks: dict[int, Task] = {}
        self.log: list[str] = []
        self._minted = Fraction(0)
        self._next_task_id = 0
        self._verify = verify_fn or proof_system.verify

    # -- supply accounting ------------------------------------------------

    def balance(self, account: str) -> Fraction:
        return self.balances.get(account, Fraction(0))

    def total_supply(self) -> Fraction:
        """Balances plus every escrowed stake and reward; equals total minted."""
        total = sum(self.balances.values(), Fraction(0))
        total += sum((r.staked for r in self.dcs.values()), Fraction(0))
        for task in self.tasks.values():
            if task.state not in _TERMINAL:
                total += task.reward
            if task.state is TaskState.CHALLENGED:
                total += task.challenger_stake
        return total

    def minted(self) -> Fraction:
        return self._minted

    def mint(self, account: str, amount: Fraction | int):
        amount = Fraction(amount)
        if amount <= 0:
            raise ValueError("mint amount must be positive")
        self.balances[account] = self.balance(account) + amount
        self._minted += amount
        self._record("mint", account, str(amount))

    # -- logging ----------------------------------------------------------

    def state_hash(self) -> bytes:
        h = hashlib.sha256()
        h.update(str(self.clock.now).encode())
        for acct in sorted(self.balances):
            h.update(f"|{acct}={self.balances[acct]}".encode())
        for dcs_id in sorted(self.dcs):
            rec = self.dcs[dcs_id]
            h.update(f"|dcs:{dcs_id}={rec.staked}:{sorted(rec.pending_tasks)}".encode())
        for tid in sorted(self.tasks):
            t = self.tasks[tid]
            h.update(f"|task:{tid}:{t.state.value}:{t.creator}:{t.reward}"
                     f":{t.solver}:{t.challenger}:{t.challenger_stake}"
                     f":{t.submitted_at}:{t.challenged_at}".encode())
            h.update(t.data_hash)
            if t.statement is not None:
                h.update(t.statement.digest)
        return h.digest()

    def _record(self, op: str, caller: str, *args: str):
        fields = [op, caller, *args, self.state_hash().hex()]
        self.log.append("\t".join(fields))

    def export_log(self) -> str:
        return "\n".join(self.log) + ("\n" if self.log else "")

    # -- helpers ----------------------------------------------------------

    def _debit(self, account: str, amount: Fraction, err: type[LedgerError]):
        if self.balance(account) < amount:
            raise err(f"{account} holds {self.balance(account)}, needs {amount}")
        self.balances[account] = self.balance(account) - amount

    def _credit(self, account: str, amount: Fraction):
        if amount:
            self.balances[account] = self.balance(account) + amount

    def _task(self, task_id: int) -> Task:
        try:
            return self.tasks[task_id]
        except KeyError:
            raise UnknownTaskError(str(task_id)) from None

    # -- operations -------------------------------------------------------

    def advance_time(self, ticks: int):
        self.clock.advance(ticks)
        self._record("advance_time", "-", str(ticks))

    def register_dcs(self, caller: str, deposit: Fraction | int):
        deposit = Fraction(deposit)
        if caller in self.dcs:
            raise AlreadyRegisteredError(caller)
        if deposit < self.params.min_deposit_dcs:
            raise InsufficientDepositError(f"{deposit} < {self.params.min_deposit_dcs}")
        self._debit(caller, deposit, InsufficientBalanceError)
        self.dcs[caller] = DcsRecord(caller, deposit)
        self._record("register_dcs", caller, str(deposit))

    def unregister_dcs(self, caller: str):
        rec = self.dcs.get(caller)
        if rec is None:
            raise NotRegisteredError(caller)
        if rec.pending_tasks:
            raise PendingTasksError(f"{caller} has tasks {sorted(rec.pending_tasks)}")
        del self.dcs[caller]
        self._credit(caller, rec.staked)
        self._record("unregister_dcs", caller)

    def create_task(self, caller: str, data_hash: bytes, reward: Fraction | int) -> int:
        reward = Fraction(reward)
        if reward <= 0:
            raise ZeroRewardError(str(reward))
        if len(data_hash) != 32:
            raise ValueError("data hash must be 32 bytes")
        self._debit(caller, reward, InsufficientBalanceError)
        task_id = self._next_task_id
        self._next_task_id += 1
        self.tasks[task_id] = Task(task_id, caller, bytes(data_hash), reward)
        self._record("create_task", caller, str(task_id), data_hash.hex(), str(reward))
        return task_id

    def submit_result(self, caller: str, task_id: int,
                      statement: Statement, t: GtElement):
        task = self._task(task_id)
        if caller not in self.dcs:
            raise NotRegisteredError(caller)
        if task.state is not TaskState.CREATED:
            raise WrongStateError(task.state.value)
        task.state = TaskState.SUBMITTED
        task.statement = statement
        task.t = t
        task.solver = caller
        task.submitted_at = self.clock.now
        self.dcs[caller].pending_tasks.add(task_id)
        self._record("submit_result", caller, str(task_id), statement.digest.hex())

    def challenge(self, caller: str, task_id: int, stake: Fraction | int):
        stake = Fraction(stake)
        task = self._task(task_id)
        if task.state is not TaskState.SUBMITTED:
            raise WrongStateError(task.state.value)
        if self.clock.now > task.submitted_at + self.params.t_cw:
            raise WindowClosedError("challenge window has closed")
        if stake < self.params.min_deposit_challenger:
            raise InsufficientStakeError(
                f"{stake} < {self.params.min_deposit_challenger}")
        self._debit(caller, stake, InsufficientBalanceError)
        task.state = TaskState.CHALLENGED
        task.challenger = caller
        task.challenger_stake = stake
        task.challenged_at = self.clock.now
        self._record("challenge", caller, str(task_id), str(stake))

    def respond(self, caller: str, task_id: int,
                proof: ProofBundle | bytes, vk: VerifyingKey) -> bool:
        task = self._task(task_id)
        if task.state is not TaskState.CHALLENGED:
            raise WrongStateError(task.state.value)
        if caller != task.solver:
            raise WrongCallerError(caller)
        if self.clock.now > task.challenged_at + self.params.t_rw:
            raise WindowClosedError("response window has closed")
        accepted = self._verify(vk, task.statement, proof)
        if accepted:
            self._challenge_fail(task)
        self._record("respond", caller, str(task_id),
                     "accepted" if accepted else "rejected")
        return accepted

    def claim_task_reward(self, caller: str, task_id: int):
        task = self._task(task_id)
        if task.state is TaskState.SUBMITTED:
            if self.clock.now <= task.submitted_at + self.params.t_cw:
                raise WindowOpenError("challenge window still open")
        elif task.state is not TaskState.RESPONDED:
            raise WrongStateError(task.state.value)
        if caller != task.solver:
            raise WrongCallerError(caller)
        task.state = TaskState.FINALIZED
        self._credit(caller, task.reward)
        if caller in self.dcs:
            self.dcs[caller].pending_tasks.discard(task_id)
        self._record("claim_task_reward", caller, str(task_id), str(task.reward))

    def claim_challenge_reward(self, caller: str, task_id: int):
        task = self._task(task_id)
        if task.state is not TaskState.CHALLENGED:
            raise WrongStateError(task.state.value)
        if caller != task.challenger:
            raise WrongCallerError(caller)
        if self.clock.now <= task.challenged_at + self.params.t_rw:
            raise WindowOpenError("response window still open")
        self._challenge_success(task)
        self._record("claim_challenge_reward", caller, str(task_id))

    # -- internal settlements ---------------------------------------------

    def _challenge_success(self, task: Task):
        """Solver failed to respond: slash, pay challenger, compensate creator."""
        rec = self.dcs.get(task.solver)
        # a solver already force-deregistered by an earlier slash has no
        # stake left to take; the challenger still recovers its own stake
        fine = min(self.params.min_deposit_dcs, rec.staked) if rec else Fraction(0)
        to_challenger = fine * self.params.slash_split_challenger
        self._credit(task.challenger, to_challenger + task.challenger_stake)
        self._credit(task.creator, (fine - to_challenger) + task.reward)
        task.challenger_stake = Fraction(0)
        if rec is not None:
            rec.staked -= fine
            rec.pending_tasks.discard(task.id)
            if rec.staked < self.params.min_deposit_dcs:
                del self.dcs[task.solver]
                self._credit(task.solver, rec.staked)
        task.state = TaskState.SLASHED

    def _challenge_fail(self, task: Task):
        """Accepting proof arrived: challenger stake pays the solver's effort."""
        self._credit(task.solver, task.challenger_stake)
        task.challenger_stake = Fraction(0)
        task.state = TaskState.RESPONDED
