"""Command-line driver: thin adapters over the library operations.

Keys, ciphertexts, and proof material are read and written as
canonical-encoding files.  Ledger subcommands operate on a pickled
ledger state file (the ledger is a local simulator; its state file is
not an interchange format).  Operation failures map to distinct exit
codes so scripts can branch on the cause:

  2 usage error          5 policy does not parse
  3 malformed encoding   6 unsatisfied policy / no transform
  4 file or blob missing 7 authentication failure
  8 ledger rule violation
  9 proof or relation error
"""

from __future__ import annotations

import argparse
import pickle
import sys
from fractions import Fraction
from pathlib import Path

from . import abe_core, harness, ledger as ledger_mod, proof_system
from .access_policy import PolicySyntaxError, find_coefficients, parse_policy
from .content_store import ContentHash, DirectoryStore, IntegrityError, NotFoundError
from .encoding import canonical_decode, canonical_encode
from .group_math import EncodingError, GtElement, RandomTape
from .ledger import Ledger, LedgerError, LedgerParams
from .proof_system import TRANSFORM_RELATION, Statement

EXIT_ENCODING = 3
EXIT_MISSING = 4
EXIT_POLICY = 5
EXIT_UNSATISFIED = 6
EXIT_AUTH = 7
EXIT_LEDGER = 8
EXIT_PROOF = 9


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise CliError(EXIT_MISSING, f"cannot read {path}: {exc}")


def _write(path: str, data: bytes):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_bytes(data)


def _load(cls, path: str):
    try:
        return canonical_decode(cls, _read(path))
    except EncodingError as exc:
        raise CliError(EXIT_ENCODING, f"{path}: {exc}")


def _tape(args) -> RandomTape:
    return RandomTape.from_int(args.seed)


def _policy(text: str):
    try:
        return parse_policy(text)
    except PolicySyntaxError as exc:
        raise CliError(EXIT_POLICY, str(exc))


def _load_ledger(path: str) -> Ledger:
    try:
        with open(path, "rb") as f:
            state = pickle.load(f)
    except OSError as exc:
        raise CliError(EXIT_MISSING, f"cannot read {path}: {exc}")
    if not isinstance(state, Ledger):
        raise CliError(EXIT_ENCODING, f"{path} is not a ledger state file")
    return state


def _save_ledger(path: str, state: Ledger):
    with open(path, "wb") as f:
        pickle.dump(state, f)


# -- subcommand bodies ----------------------------------------------------

def _cmd_setup(args):
    pk, msk = abe_core.setup(_tape(args))
    _write(str(Path(args.out) / "pk.bin"), canonical_encode(pk))
    _write(str(Path(args.out) / "msk.bin"), canonical_encode(msk))
    print(f"wrote {args.out}/pk.bin and {args.out}/msk.bin")


def _cmd_keygen(args):
    pk = _load(abe_core.PublicKey, args.pk)
    msk = _load(abe_core.MasterKey, args.msk)
    attrs = [a for a in args.attrs.split(",") if a]
    try:
        sk = abe_core.keygen(pk, msk, attrs, _tape(args))
    except abe_core.EmptyAttributeSetError as exc:
        raise CliError(EXIT_POLICY, str(exc))
    _write(args.out, canonical_encode(sk))
    print(f"wrote {args.out} for attributes {sorted(attrs)}")


def _cmd_encrypt(args):
    pk = _load(abe_core.PublicKey, args.pk)
    pkg = abe_core.hybrid_encrypt(pk, _policy(args.policy),
                                  _read(args.infile), _tape(args))
    _write(args.out, canonical_encode(pkg))
    print(f"wrote {args.out}")


def _cmd_tkgen(args):
    sk = _load(abe_core.SecretKey, args.sk)
    tk, rk = abe_core.tkgen(sk, _tape(args))
    _write(args.out_tk, canonical_encode(tk))
    _write(args.out_rk, canonical_encode(rk))
    print(f"wrote {args.out_tk} and {args.out_rk}")


def _cmd_transform(args):
    tk = _load(abe_core.TransformKey, args.tk)
    pkg = _load(abe_core.HybridPackage, args.package)
    w = find_coefficients(pkg.ct.policy, tk.attrs)
    result = abe_core.transform(tk, pkg.ct, w)
    if result is None:
        raise CliError(EXIT_UNSATISFIED, "key attributes do not satisfy the policy")
    _write(args.out, canonical_encode(result))
    print(f"wrote {args.out}")


def _cmd_retrieve(args):
    rk = _load(abe_core.RetrieveKey, args.rk)
    pkg = _load(abe_core.HybridPackage, args.package)
    tct = _load(abe_core.TransformedCiphertext, args.transformed)
    m = abe_core.retrieve(tct, rk)
    try:
        plaintext = abe_core.hybrid_decrypt(pkg, m)
    except abe_core.AuthenticationError as exc:
        raise CliError(EXIT_AUTH, str(exc))
    _write(args.out, plaintext)
    print(f"wrote {args.out}")


def _cmd_store_put(args):
    h = DirectoryStore(args.root).put(_read(args.infile))
    print(h.hex)


def _cmd_store_get(args):
    try:
        data = DirectoryStore(args.root).get(ContentHash.from_hex(args.hash))
    except NotFoundError:
        raise CliError(EXIT_MISSING, f"no blob {args.hash}")
    except IntegrityError:
        raise CliError(EXIT_ENCODING, f"blob {args.hash} failed its integrity check")
    except ValueError as exc:
        raise CliError(EXIT_ENCODING, str(exc))
    _write(args.out, data)
    print(f"wrote {args.out}")


def _cmd_ledger_init(args):
    params = LedgerParams.from_file(args.params) if args.params else LedgerParams()
    _save_ledger(args.state, Ledger(params))
    print(f"initialized {args.state}")


def _with_ledger(args, fn):
    state = _load_ledger(args.state)
    try:
        out = fn(state)
    except LedgerError as exc:
        raise CliError(EXIT_LEDGER, f"{type(exc).__name__}: {exc}")
    _save_ledger(args.state, state)
    return out


def _cmd_ledger_mint(args):
    _with_ledger(args, lambda l: l.mint(args.account, Fraction(args.amount)))
    print(f"minted {args.amount} to {args.account}")


def _cmd_ledger_register(args):
    _with_ledger(args, lambda l: l.register_dcs(args.account, Fraction(args.deposit)))
    print(f"registered {args.account}")


def _cmd_ledger_unregister(args):
    _with_ledger(args, lambda l: l.unregister_dcs(args.account))
    print(f"unregistered {args.account}")


def _cmd_ledger_create_task(args):
    data_hash = ContentHash.from_hex(args.hash)
    task_id = _with_ledger(
        args, lambda l: l.create_task(args.account, data_hash.digest,
                                      Fraction(args.reward)))
    print(task_id)


def _cmd_ledger_submit(args):
    statement = _load(Statement, args.statement)
    t = _load(GtElement, args.t)
    _with_ledger(args, lambda l: l.submit_result(args.account, args.task,
                                                 statement, t))
    print(f"task {args.task} submitted")


def _cmd_ledger_challenge(args):
    _with_ledger(args, lambda l: l.challenge(args.account, args.task,
                                             Fraction(args.stake)))
    print(f"task {args.task} challenged")


def _cmd_ledger_respond(args):
    proof = _read(args.proof)
    _, vk = proof_system.preprocess(TRANSFORM_RELATION)
    accepted = _with_ledger(args, lambda l: l.respond(args.account, args.task,
                                                      proof, vk))
    print("accepted" if accepted else "rejected")
    if not accepted:
        raise CliError(EXIT_PROOF, "response proof rejected")


def _cmd_ledger_claim_task(args):
    _with_ledger(args, lambda l: l.claim_task_reward(args.account, args.task))
    print(f"task {args.task} reward claimed")


def _cmd_ledger_claim_challenge(args):
    _with_ledger(args, lambda l: l.claim_challenge_reward(args.account, args.task))
    print(f"task {args.task} challenge reward claimed")


def _cmd_ledger_advance(args):
    _with_ledger(args, lambda l: l.advance_time(args.ticks))
    print(f"advanced {args.ticks} ticks")


def _cmd_ledger_show(args):
    state = _load_ledger(args.state)
    print(f"now: {state.clock.now}")
    print(f"supply: {state.total_supply()}")
    for acct in sorted(state.balances):
        print(f"balance {acct}: {state.balances[acct]}")
    for name in sorted(state.dcs):
        rec = state.dcs[name]
        print(f"dcs {name}: staked {rec.staked}, pending {sorted(rec.pending_tasks)}")
    for tid in sorted(state.tasks):
        t = state.tasks[tid]
        print(f"task {tid}: {t.state.value} creator={t.creator} reward={t.reward}"
              f" solver={t.solver}")


def _cmd_ledger_log(args):
    sys.stdout.write(_load_ledger(args.state).export_log())


_SCENARIOS = {
    "happy": lambda args: harness.run_happy_case(seed=args.seed, params=args._params),
    "challenge-honest": lambda args: harness.run_challenge_case(
        "honest", seed=args.seed, params=args._params),
    "challenge-corrupt": lambda args: harness.run_challenge_case(
        "corrupt_T", seed=args.seed, params=args._params),
    "challenge-random": lambda args: harness.run_challenge_case(
        "random_T", seed=args.seed, params=args._params),
    "self-challenge": lambda args: harness.run_self_challenge_case(
        seed=args.seed, params=args._params),
}


def _cmd_scenario(args):
    args._params = LedgerParams.from_file(args.params) if args.params else None
    try:
        result = _SCENARIOS[args.name](args)
    except harness.ScenarioFailure as exc:
        raise CliError(EXIT_PROOF, f"scenario assertion failed: {exc}")
    sys.stdout.write(result.log)
    print(f"scenario: {result.name}")
    print(f"log hash: {result.log_hash}")
    if result.recovered is not None:
        print(f"plaintext recovered: {result.recovered}")
    for account, delta in sorted(result.payoffs.items()):
        sign = "+" if delta >= 0 else ""
        print(f"payoff {account}: {sign}{delta}")
    for note in result.notes:
        print(f"note: {note}")


def _cmd_bench(args):
    grid = tuple(int(x) for x in args.attrs.split(",")) if args.attrs \
        else tuple(range(5, 65, 5))
    report = harness.bench(grid=grid, reps=args.reps, seed=args.seed,
                           out_dir=args.out)
    sys.stdout.write(report.to_table())
    if args.out:
        print(f"wrote {args.out}/bench.csv and {args.out}/bench.txt")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poabe",
        description="attribute-based encryption with payable outsourced "
                    "decryption: keys, tasks, challenges, benchmarks")
    sub = parser.add_subparsers(dest="command", required=True)

    def cmd(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(fn=fn)
        return p

    p = cmd("setup", _cmd_setup, "generate public and master keys")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")

    p = cmd("keygen", _cmd_keygen, "issue a secret key for an attribute set")
    p.add_argument("--pk", required=True)
    p.add_argument("--msk", required=True)
    p.add_argument("--attrs", required=True, help="comma-separated attributes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = cmd("encrypt", _cmd_encrypt, "hybrid-encrypt a file under a policy")
    p.add_argument("--pk", required=True)
    p.add_argument("--policy", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = cmd("tkgen", _cmd_tkgen, "derive transform and retrieve keys")
    p.add_argument("--sk", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-tk", required=True)
    p.add_argument("--out-rk", required=True)

    p = cmd("transform", _cmd_transform, "partially decrypt with a transform key")
    p.add_argument("--tk", required=True)
    p.add_argument("--package", required=True)
    p.add_argument("--out", required=True)

    p = cmd("retrieve", _cmd_retrieve, "finish decryption with the retrieve key")
    p.add_argument("--rk", required=True)
    p.add_argument("--package", required=True)
    p.add_argument("--transformed", required=True)
    p.add_argument("--out", required=True)

    p = cmd("store-put", _cmd_store_put, "add a blob to a directory store")
    p.add_argument("--root", required=True)
    p.add_argument("--in", dest="infile", required=True)

    p = cmd("store-get", _cmd_store_get, "fetch a blob by hash")
    p.add_argument("--root", required=True)
    p.add_argument("--hash", required=True)
    p.add_argument("--out", required=True)

    p = cmd("ledger-init", _cmd_ledger_init, "create a fresh ledger state file")
    p.add_argument("--state", required=True)
    p.add_argument("--params", help="key=value parameter file")

    def ledger_cmd(name, fn, help_text):
        p = cmd(name, fn, help_text)
        p.add_argument("--state", required=True)
        return p

    p = ledger_cmd("ledger-mint", _cmd_ledger_mint, "mint tokens to an account")
    p.add_argument("--account", required=True)
    p.add_argument("--amount", required=True)

    p = ledger_cmd("ledger-register-dcs", _cmd_ledger_register,
                   "stake and register a decryption server")
    p.add_argument("--account", required=True)
    p.add_argument("--deposit", required=True)

    p = ledger_cmd("ledger-unregister-dcs", _cmd_ledger_unregister,
                   "withdraw a server's stake")
    p.add_argument("--account", required=True)

    p = ledger_cmd("ledger-create-task", _cmd_ledger_create_task,
                   "escrow a reward for a data hash")
    p.add_argument("--account", required=True)
    p.add_argument("--hash", required=True)
    p.add_argument("--reward", required=True)

    p = ledger_cmd("ledger-submit-result", _cmd_ledger_submit,
                   "submit a statement digest and T for a task")
    p.add_argument("--account", required=True)
    p.add_argument("--task", type=int, required=True)
    p.add_argument("--statement", required=True, help="statement file")
    p.add_argument("--t", required=True, help="target-group element file")

    p = ledger_cmd("ledger-challenge", _cmd_ledger_challenge,
                   "stake against a submitted result")
    p.add_argument("--account", required=True)
    p.add_argument("--task", type=int, required=True)
    p.add_argument("--stake", required=True)

    p = ledger_cmd("ledger-respond", _cmd_ledger_respond,
                   "answer a challenge with a proof bundle")
    p.add_argument("--account", required=True)
    p.add_argument("--task", type=int, required=True)
    p.add_argument("--proof", required=True, help="proof bundle file")

    p = ledger_cmd("ledger-claim-task-reward", _cmd_ledger_claim_task,
                   "collect the reward after the challenge window")
    p.add_argument("--account", required=True)
    p.add_argument("--task", type=int, required=True)

    p = ledger_cmd("ledger-claim-challenge-reward", _cmd_ledger_claim_challenge,
                   "settle an unanswered challenge")
    p.add_argument("--account", required=True)
    p.add_argument("--task", type=int, required=True)

    p = ledger_cmd("ledger-advance", _cmd_ledger_advance, "advance the clock")
    p.add_argument("--ticks", type=int, required=True)

    ledger_cmd("ledger-show", _cmd_ledger_show, "print balances, servers, tasks")
    ledger_cmd("ledger-log", _cmd_ledger_log, "print the transaction log")

    p = cmd("scenario", _cmd_scenario, "run a scripted end-to-end scenario")
    p.add_argument("name", choices=sorted(_SCENARIOS))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--params", help="key=value parameter file")

    p = cmd("bench", _cmd_bench, "time the algorithms over an attribute sweep")
    p.add_argument("--attrs", help="comma-separated attribute counts")
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="directory for bench.csv and bench.txt")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    return 0


if __name__ == "__main__":
    sys.exit(main())
