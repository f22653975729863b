"""Command-line front end.

Most subcommands talk to a running node over HTTP (NODE_URL env var, overridden
by --node).  simulate, diff-test, and bench run fully in-process and need no
node.
"""

import json
import random
import sys
import time

import click
import httpx

from .group import DEFAULT_GROUP
from .params import OPTION_NAMES


def _option_name(j: int) -> str:
    return OPTION_NAMES[j] if j < len(OPTION_NAMES) else f"opt{j}"


class Ctx:
    def __init__(self, node_url: str):
        self.node_url = node_url.rstrip("/")

    def post(self, path: str, body: dict | None = None) -> dict:
        r = httpx.post(self.node_url + path, json=body if body is not None else {},
                       timeout=120.0)
        if r.status_code >= 400:
            detail = r.json().get("detail", r.text) if r.headers.get(
                "content-type", "").startswith("application/json") else r.text
            click.echo(f"error={detail} status={r.status_code}", err=True)
            sys.exit(1)
        return r.json()

    def get(self, path: str) -> dict:
        r = httpx.get(self.node_url + path, timeout=60.0)
        if r.status_code >= 400:
            click.echo(f"error={r.text} status={r.status_code}", err=True)
            sys.exit(1)
        return r.json()


def _echo_event(ev: dict):
    click.echo(f"seq={ev['seq']} kind={ev['kind']}")


@click.group()
@click.option("--node", envvar="NODE_URL", default="http://127.0.0.1:8400",
              show_default=True, help="node base URL")
@click.pass_context
def main(ctx, node):
    ctx.obj = Ctx(node)


@main.command()
@click.option("--tokens", "tokens_file", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="file with one 'partyIndex tokens' pair per line")
@click.pass_obj
def setup(ctx, tokens_file):
    """Initialize the board from a token distribution file."""
    pairs = []
    with open(tokens_file) as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            idx, amount = line.split()
            pairs.append((int(idx), int(amount)))
    pairs.sort()
    if [i for i, _ in pairs] != list(range(len(pairs))):
        click.echo("error=token file must cover party indices 0..n-1", err=True)
        sys.exit(1)
    ev = ctx.post("/setup", {"tokens": [t for _, t in pairs]})
    _echo_event(ev)
    click.echo(f"parties={len(pairs)} total={sum(t for _, t in pairs)}")


@main.command()
@click.option("--party", required=True, type=int)
@click.pass_obj
def register(ctx, party):
    """Register a party as a delegate."""
    _echo_event(ctx.post(f"/parties/{party}/register"))


@main.command()
@click.option("--party", required=True, type=int)
@click.pass_obj
def unregister(ctx, party):
    _echo_event(ctx.post(f"/parties/{party}/unregister"))


@main.command()
@click.option("--from", "frm", required=True, type=int, help="delegating party")
@click.option("--to", required=True, type=int, help="target delegate")
@click.option("--anonymity", required=True, type=int, help="anonymity-set size")
@click.pass_obj
def delegate(ctx, frm, to, anonymity):
    """Delegate voting power behind an anonymity set."""
    out = ctx.post(f"/parties/{frm}/delegate",
                   {"target": to, "set_size": anonymity})
    _echo_event(out["event"])
    click.echo(f"anon_set={','.join(map(str, out['bundle']['anon_set']))}")


@main.command()
@click.option("--party", required=True, type=int)
@click.pass_obj
def undelegate(ctx, party):
    _echo_event(ctx.post(f"/parties/{party}/undelegate"))


@main.group()
def election():
    """Election lifecycle operations."""


@election.command("create")
@click.option("--eid", required=True)
@click.option("--party", required=True, type=int, help="creator")
@click.option("--desc", default="")
@click.pass_obj
def election_create(ctx, eid, party, desc):
    _echo_event(ctx.post("/elections", {"party": party, "eid": eid, "desc": desc}))


@election.command("start")
@click.option("--eid", required=True)
@click.option("--party", required=True, type=int, help="creator")
@click.pass_obj
def election_start(ctx, eid, party):
    _echo_event(ctx.post(f"/elections/{eid}/start", {"party": party}))


@main.command()
@click.option("--eid", required=True)
@click.option("--party", required=True, type=int)
@click.option("--choice", required=True, type=int)
@click.option("--private", is_flag=True, default=False,
              help="hide the chosen option behind a validity proof")
@click.pass_obj
def vote(ctx, eid, party, choice, private):
    """Cast a vote with the party's snapshotted power."""
    _echo_event(ctx.post(f"/elections/{eid}/vote",
                         {"party": party, "choice": choice, "private": private}))


@main.command()
@click.option("--eid", required=True)
@click.pass_obj
def tally(ctx, eid):
    """Decrypt and publish the result as percentages."""
    ctx.post(f"/elections/{eid}/tally")
    el = ctx.get(f"/elections/{eid}")
    click.echo(format_tally(el["result"], el["no_votes"]))


def format_tally(percentages: list[int], no_votes: bool) -> str:
    if no_votes:
        return "no votes"
    return " ".join(
        f"{_option_name(j)} {bp / 100:.2f}%" for j, bp in enumerate(percentages)
    )


@main.command()
@click.option("--from", "frm", required=True, type=int)
@click.option("--to", required=True, type=int)
@click.option("--amount", required=True, type=int)
@click.pass_obj
def transfer(ctx, frm, to, amount):
    """Move unlocked tokens between parties."""
    _echo_event(ctx.post("/transfer", {"from": frm, "to": to, "amount": amount}))


@main.command()
@click.option("--port", default=8400, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data-dir", default="./delegov-data", show_default=True)
@click.option("--seed", default=None, type=int, help="deterministic node randomness")
def serve(port, host, data_dir, seed):
    """Run a node locally."""
    from .service import NodeConfig, serve as run_node

    click.echo(f"listening host={host} port={port} data_dir={data_dir}")
    run_node(NodeConfig(data_dir=data_dir, seed=seed), host=host, port=port)


@main.command()
@click.option("--seed", required=True, type=int)
@click.option("--commands", "n_commands", default=32, show_default=True, type=int)
def simulate(seed, n_commands):
    """Generate a random command trace and run it end to end in-process."""
    from .board import BoardError
    from .oracle import RealStack, trace_gen

    trace = trace_gen(seed, max_commands=n_commands)
    stack = RealStack(DEFAULT_GROUP, random.Random(seed))
    accepted = rejected = 0
    for cmd in trace:
        try:
            stack.step(cmd)
            accepted += 1
            status = "ok"
        except BoardError as e:
            rejected += 1
            status = e.reason
        args = {k: v for k, v in cmd.items() if k != "verb"}
        click.echo(f"cmd={cmd['verb']} args={json.dumps(args)} status={status}")
    click.echo(f"accepted={accepted} rejected={rejected} "
               f"state_hash={stack.board.state_hash().hex()}")


@main.command("diff-test")
@click.option("--seeds", required=True, type=int, help="number of seeds, 0..N-1")
def diff_test(seeds):
    """Differential comparison of the deployed protocol against its ideal model."""
    from .oracle import differential_run, trace_gen

    equal = 0
    for s in range(seeds):
        verdict = differential_run(trace_gen(s), DEFAULT_GROUP, seed=s)
        if verdict.equal:
            equal += 1
        else:
            click.echo(f"seed={s} divergence_index={verdict.divergence_index} "
                       f"detail={verdict.detail}")
    click.echo(f"{equal}/{seeds} Equal")
    if equal != seeds:
        sys.exit(1)


@main.command()
@click.option("--relation", required=True,
              type=click.Choice(["delegation", "vote", "decryption"]))
@click.option("--size", default=10, show_default=True, type=int,
              help="vector length (anonymity-set size / option count)")
@click.option("--iterations", default=5, show_default=True, type=int)
def bench(relation, size, iterations):
    """Time proof generation and verification."""
    from . import client as cl
    from .authority import Authority
    from .elgamal import ct_add, enc_keygen, encrypt
    from .nizk import (
        DelegationStatement, VoteStatement, verify_delegation, verify_vote,
        verify_decryption, DecryptionStatement,
    )
    from .merkle import MerkleTree
    from .wire import power_leaf, token_leaf

    rng = random.Random(2024)
    g = DEFAULT_GROUP
    keys = enc_keygen(g, rng)
    n = max(size, 4)
    tokens = [rng.randint(1, 10) for _ in range(n)]

    prove_times, verify_times = [], []
    for _ in range(iterations):
        if relation == "delegation":
            state = cl.voter_setup(tokens, 0)
            pool = list(range(n))
            t0 = time.perf_counter()
            bundle = cl.build_delegation(state, 1, size, pool, keys.pk, tokens, rng, g)
            t1 = time.perf_counter()
            tree = MerkleTree([token_leaf(i, t) for i, t in enumerate(tokens)])
            stmt = DelegationStatement(
                pk=keys.pk, anon_set=bundle.anon_set, ct_vec=bundle.ct_vec,
                t=tokens[0], token_root=tree.root,
                token_proof=bundle.token_proof, voter_index=0,
            )
            ok = verify_delegation(g, stmt, bundle.proof)
            t2 = time.perf_counter()
        elif relation == "vote":
            powers = {i: encrypt(g, keys.pk, tokens[i], g.rand_scalar(rng))
                      for i in range(n)}
            state = cl.voter_setup(tokens, 0)
            t0 = time.perf_counter()
            cmd = cl.cast_private_vote(state, "bench", 1, size, powers, keys.pk, rng, g)
            t1 = time.perf_counter()
            from .elgamal import Ciphertext
            from .merkle import MerkleProof
            from .nizk import VectorProof
            tree = MerkleTree([power_leaf(i, powers[i]) for i in range(n)])
            stmt = VoteStatement(
                pk=keys.pk, power_ct=powers[0],
                vote_vec=tuple(Ciphertext.from_bytes(bytes.fromhex(h), g)
                               for h in cmd["vote_vec"]),
                delegate_index=0, snapshot_root=tree.root,
                snapshot_proof=MerkleProof.from_bytes(bytes.fromhex(cmd["snapshot_proof"])),
            )
            ok = verify_vote(g, stmt, VectorProof.from_bytes(bytes.fromhex(cmd["proof"]), g))
            t2 = time.perf_counter()
        else:
            auth = Authority(g, rng)
            auth.setup(tokens)
            cts = [encrypt(g, auth.enc_keys.pk, rng.randint(0, 3), g.rand_scalar(rng))
                   for _ in range(size)]
            t0 = time.perf_counter()
            result, proof = auth.tally_decrypt("bench", cts)
            t1 = time.perf_counter()
            stmt = DecryptionStatement(pk=auth.enc_keys.pk, tally_cts=tuple(cts),
                                       plain_counts=tuple(proof.counts))
            ok = verify_decryption(g, stmt, proof)
            t2 = time.perf_counter()
        assert ok, "benchmark proof failed to verify"
        prove_times.append(t1 - t0)
        verify_times.append(t2 - t1)

    click.echo(f"relation={relation} size={size} iterations={iterations}")
    click.echo(f"prove_ms_avg={1000 * sum(prove_times) / len(prove_times):.1f} "
               f"prove_ms_max={1000 * max(prove_times):.1f}")
    click.echo(f"verify_ms_avg={1000 * sum(verify_times) / len(verify_times):.1f} "
               f"verify_ms_max={1000 * max(verify_times):.1f}")


if __name__ == "__main__":
    main()
