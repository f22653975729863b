"""HTTP/JSON node hosting the board, the authority, and client-assist endpoints.

Every mutating request is turned into a self-describing command record,
appended to the JSON-lines log before it is acknowledged, and applied through
a single serial lock.  Restart replays the log from genesis; the resulting
state is bit-identical to the uninterrupted run.

Client-assist: delegation and private-vote proofs are built node-side from
the caller's party index, so browsers never reimplement the crypto.  The
returned delegation bundle is the caller's local cache for undelegation.
"""

import json
import random
import threading
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, HTTPException

from . import client as cl
from .authority import Authority
from .board import AlreadyInitialized, Board, BoardError
from .group import DEFAULT_GROUP, GroupParams


class CorruptLog(RuntimeError):
    pass


@dataclass
class NodeConfig:
    data_dir: str
    num_options: int = 3
    seed: int | None = None  # deterministic authority/client randomness for tests


class Node:
    def __init__(self, config: NodeConfig, group: GroupParams = DEFAULT_GROUP):
        self.config = config
        self.group = group
        self.rng = random.Random(config.seed) if config.seed is not None else random.SystemRandom()
        self.authority = Authority(group, self.rng)
        self.board = Board(group)
        self.clients: dict[int, cl.VoterState] = {}
        self.lock = threading.Lock()
        self.log_path = Path(config.data_dir) / "log.jsonl"
        self.log_path.parent.mkdir(parents=True, exist_ok=True)
        self._replay()

    # -- persistence --------------------------------------------------------

    def _replay(self):
        if not self.log_path.exists():
            return
        try:
            records = [json.loads(line) for line in self.log_path.read_text().splitlines() if line]
        except json.JSONDecodeError as e:
            raise CorruptLog(str(e)) from e
        for rec in records:
            try:
                self._apply(rec["cmd"])
            except BoardError:
                pass
            except (KeyError, ValueError) as e:
                raise CorruptLog(f"bad record {rec!r}: {e}") from e

    def _append_log(self, cmd: dict, rejected: str | None = None):
        rec = {"cmd": cmd}
        if rejected:
            rec["rejected"] = rejected
        with self.log_path.open("a") as f:
            f.write(json.dumps(rec, sort_keys=True) + "\n")

    # -- command application ------------------------------------------------

    def _apply(self, cmd: dict):
        ev = self.board.apply_command(cmd)
        op = cmd["op"]
        if op == "setup":
            self.clients = {
                i: cl.voter_setup(cmd["tokens"], i) for i in range(len(cmd["tokens"]))
            }
        elif op == "delegate" and cmd["party"] in self.clients:
            st = self.clients[cmd["party"]]
            st.stored_anon_set = tuple(cmd["anon_set"])
            from .elgamal import Ciphertext
            st.stored_ct_vec = tuple(
                Ciphertext.from_bytes(bytes.fromhex(h), self.group) for h in cmd["ct_vec"]
            )
        elif op == "undelegate" and cmd["party"] in self.clients:
            cl.mark_undelegated(self.clients[cmd["party"]])
        return ev

    def submit(self, cmd: dict) -> dict:
        """Serialize, log, apply; returns the resulting event record."""
        with self.lock:
            try:
                ev = self._apply(cmd)
            except BoardError as e:
                self._append_log(cmd, rejected=e.reason)
                raise
            self._append_log(cmd)
            return ev.to_record()


def create_app(config: NodeConfig, group: GroupParams = DEFAULT_GROUP) -> FastAPI:
    node = Node(config, group)
    app = FastAPI(title="delegov node")
    app.state.node = node

    def guard(fn, *a, **kw):
        try:
            return fn(*a, **kw)
        except BoardError as e:
            raise HTTPException(status_code=409, detail=e.reason)
        except cl.ClientError as e:
            raise HTTPException(status_code=409, detail=type(e).__name__)
        except (KeyError, ValueError) as e:
            raise HTTPException(status_code=400, detail=str(e))

    # -- mutations ----------------------------------------------------------

    @app.post("/setup")
    def setup(body: dict):
        def run():
            with node.lock:
                if node.board.initialized:
                    raise AlreadyInitialized()
            bundle = node.authority.setup(list(body["tokens"]))
            cmd = {
                "op": "setup",
                "pk_enc": hex(bundle.pk_enc),
                "vk_sig": bundle.vk_sig.hex(),
                "tokens": bundle.token_list,
                "root": bundle.token_root.hex(),
                "sig": bundle.root_sig.hex(),
                "num_options": body.get("num_options", node.config.num_options),
            }
            return node.submit(cmd)
        return guard(run)

    @app.post("/parties/{p}/register")
    def register(p: int):
        return guard(node.submit, {"op": "register", "party": p})

    @app.post("/parties/{p}/unregister")
    def unregister(p: int):
        return guard(node.submit, {"op": "unregister", "party": p})

    @app.post("/parties/{p}/delegate")
    def delegate(p: int, body: dict):
        def run():
            if "ct_vec" in body:  # pre-built bundle
                cmd = {"op": "delegate", "party": p, **{k: body[k] for k in
                       ("anon_set", "ct_vec", "proof", "token_proof")}}
                return {"event": node.submit(cmd)}
            # client-assist: build the bundle node-side
            b = node.board
            state = node.clients[p]
            state.tokens = b.balances[p]
            pool = [i for i in range(b.num_parties) if b.active[i] == 1]
            token_list = [b.balances[i] for i in range(b.num_parties)]
            bundle = cl.build_delegation(
                state, int(body["target"]), int(body["set_size"]), pool,
                b.pk_enc, token_list, node.rng, node.group,
            )
            cmd = bundle.to_command(p)
            event = node.submit(cmd)
            return {
                "event": event,
                "bundle": {
                    "anon_set": list(bundle.anon_set),
                    "ct_vec": [c.to_bytes().hex() for c in bundle.ct_vec],
                },
            }
        return guard(run)

    @app.post("/parties/{p}/undelegate")
    def undelegate(p: int, body: dict | None = None):
        def run():
            body_ = body or {}
            if "ct_vec" in body_:
                cmd = {"op": "undelegate", "party": p,
                       "anon_set": list(body_["anon_set"]),
                       "ct_vec": list(body_["ct_vec"])}
            else:
                cmd = cl.build_undelegation(node.clients[p])
            return node.submit(cmd)
        return guard(run)

    @app.post("/elections")
    def election_setup(body: dict):
        def run():
            return node.submit({
                "op": "election_setup", "party": int(body["party"]),
                "eid": str(body["eid"]), "desc": body.get("desc", ""),
            })
        return guard(run)

    @app.post("/elections/{eid}/start")
    def election_start(eid: str, body: dict):
        def run():
            return node.submit({
                "op": "election_start", "party": int(body["party"]), "eid": eid,
            })
        return guard(run)

    @app.post("/elections/{eid}/vote")
    def vote(eid: str, body: dict):
        def run():
            p = int(body["party"])
            b = node.board
            el = b.elections.get(eid)
            if el is None or el.snapshot_powers is None:
                raise KeyError(f"election {eid} not started")
            state = node.clients[p]
            if body.get("private"):
                cmd = cl.cast_private_vote(
                    state, eid, int(body["choice"]), b.params.num_options,
                    el.snapshot_powers, b.pk_enc, node.rng, node.group,
                )
            else:
                cmd = cl.cast_public_vote(
                    state, eid, int(body["choice"]), b.params.num_options,
                    el.snapshot_powers,
                )
            return node.submit(cmd)
        return guard(run)

    @app.post("/elections/{eid}/tally")
    def tally(eid: str):
        def run():
            b = node.board
            el = b.elections.get(eid)
            if el is None:
                raise KeyError(f"no election {eid}")
            result, proof = node.authority.tally_decrypt(eid, el.tallies)
            return node.submit({
                "op": "tally", "eid": eid,
                "percentages": result.percentages,
                "dec_proof": proof.to_bytes().hex(),
            })
        return guard(run)

    @app.post("/transfer")
    def transfer(body: dict):
        def run():
            cmd = {"op": "transfer", "from": int(body["from"]),
                   "to": int(body["to"]), "amount": int(body["amount"])}
            ev = node.submit(cmd)
            root, sig = node.authority.refresh_root([cmd])
            node.submit({"op": "refresh_root", "root": root.hex(), "sig": sig.hex()})
            return ev
        return guard(run)

    # -- reads --------------------------------------------------------------

    @app.get("/state")
    def state():
        b = node.board
        if not b.initialized:
            return {"initialized": False}
        return {
            "initialized": True,
            "num_parties": b.num_parties,
            "num_options": b.params.num_options,
            "balances": {str(k): v for k, v in b.balances.items()},
            "locks": {str(k): v for k, v in b.locks.items()},
            "active": {str(k): v for k, v in b.active.items()},
            "delegated": {str(k): bool(v) for k, v in b.delegation_ids.items()},
            "token_root": b.token_root.hex(),
            "stale_root": b.stale_root,
            "elections": sorted(b.elections),
            "state_hash": b.state_hash().hex(),
        }

    @app.get("/elections/{eid}")
    def election(eid: str):
        el = node.board.elections.get(eid)
        if el is None:
            raise HTTPException(status_code=404, detail="NoSuchElection")
        return {
            "eid": el.eid, "desc": el.desc, "creator": el.creator,
            "phase": el.phase,
            "voted": sorted(el.voted),
            "snapshot_root": el.snapshot_root.hex() if el.snapshot_root else None,
            "result": el.result, "no_votes": el.no_votes,
        }

    @app.get("/elections/{eid}/snapshot")
    def snapshot(eid: str):
        el = node.board.elections.get(eid)
        if el is None or el.snapshot_powers is None:
            raise HTTPException(status_code=404, detail="NoSnapshot")
        return {
            "eid": eid,
            "snapshot_root": el.snapshot_root.hex(),
            "powers": {str(k): v.to_bytes().hex() for k, v in sorted(el.snapshot_powers.items())},
        }

    @app.get("/events")
    def events(from_seq: int = 0):
        return [ev.to_record() for ev in node.board.event_log if ev.seq >= from_seq]

    return app


def serve(config: NodeConfig, host: str = "127.0.0.1", port: int = 8400):
    import uvicorn

    uvicorn.run(create_app(config), host=host, port=port, log_level="warning")
