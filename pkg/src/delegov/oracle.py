"""Executable ideal functionality and differential testing.

The ideal model keeps per-party registration bits, delegation pointers, and
token counts, accumulates per-election voting power at election start, and
tallies with the shared basis-point function.  A seeded generator produces
traces that satisfy both the real contract's guards and the ideal model's
guards, and the differential runner replays each trace through the full real
stack and the ideal model, comparing their public transcripts.
"""

import random
from dataclasses import dataclass, field

from . import client as cl
from .authority import Authority
from .board import Board, BoardError
from .group import DEFAULT_GROUP, GroupParams
from .params import basis_points


@dataclass
class IdealElection:
    eid: str
    desc: str
    creator: int
    started: bool = False
    tallied: bool = False
    voted: dict[int, int] = field(default_factory=dict)
    power: dict[int, int] = field(default_factory=dict)   # t^eid per party
    counters: list[int] = field(default_factory=list)
    percentages: list[int] | None = None


@dataclass
class IdealState:
    num_options: int = 3
    reg: dict[int, int] = field(default_factory=dict)
    d: dict[int, int] = field(default_factory=dict)
    t: dict[int, int] = field(default_factory=dict)
    elections: dict[str, IdealElection] = field(default_factory=dict)
    events: list[tuple] = field(default_factory=list)


def ideal_step(state: IdealState, cmd: dict):
    """One transition of the ideal voting machine; invalid commands are ignored."""
    verb = cmd["verb"]
    ev = state.events
    if verb == "setup":
        tokens = cmd["tokens"]
        for i, tok in enumerate(tokens):
            state.reg[i] = 0
            state.d[i] = i
            state.t[i] = tok
        ev.append(("setup", tuple(tokens)))
    elif verb == "register":
        p = cmd["actor"]
        if p in state.reg:
            state.reg[p] = 1
            ev.append(("register", p))
    elif verb == "unregister":
        p = cmd["actor"]
        if p in state.reg:
            state.reg[p] = 0
            ev.append(("unregister", p))
    elif verb == "delegate":
        p = cmd["actor"]
        if p in state.reg and state.reg[p] == 0:
            state.d[p] = cmd["target"]
            # only the fact of delegation is broadcast
            ev.append(("delegate", p))
    elif verb == "undelegate":
        p = cmd["actor"]
        if p in state.d:
            state.d[p] = p
            ev.append(("undelegate", p))
    elif verb == "esetup":
        p, eid = cmd["actor"], cmd["eid"]
        if eid not in state.elections:
            state.elections[eid] = IdealElection(
                eid=eid, desc=cmd.get("desc", ""), creator=p,
                counters=[0] * state.num_options,
            )
            ev.append(("esetup", eid, cmd.get("desc", ""), p))
    elif verb == "estart":
        p, eid = cmd["actor"], cmd["eid"]
        el = state.elections.get(eid)
        if el is not None and el.creator == p and not el.started:
            for i in state.t:
                el.power.setdefault(i, 0)
            for i, tok in state.t.items():
                el.power[state.d[i]] = el.power.get(state.d[i], 0) + tok
            el.started = True
            ev.append(("estart", eid))
    elif verb == "vote":
        p, eid, v = cmd["actor"], cmd["eid"], cmd["option"]
        el = state.elections.get(eid)
        if (el is not None and el.started and not el.tallied
                and state.reg.get(p) == 1 and 0 <= v < state.num_options
                and not el.voted.get(p, 0)):
            el.voted[p] = 1
            el.counters[v] += el.power.get(p, 0)
            if cmd.get("private"):
                ev.append(("vote", eid, p))
            else:
                ev.append(("vote", eid, p, v))
    elif verb == "tally":
        eid = cmd["eid"]
        el = state.elections.get(eid)
        if el is not None and el.started and not el.tallied:
            el.percentages, _ = basis_points(el.counters)
            el.tallied = True
            ev.append(("tally", eid, tuple(el.percentages)))
    elif verb == "transfer":
        frm, to, amount = cmd["actor"], cmd["to"], cmd["amount"]
        if frm in state.t and to in state.t and 0 <= amount <= state.t[frm]:
            state.t[frm] -= amount
            state.t[to] += amount
            ev.append(("transfer", frm, to, amount))
    else:
        raise ValueError(f"unknown verb {cmd['verb']!r}")


# ---------------------------------------------------------------------------
# Trace generation


VERBS = ("register", "unregister", "delegate", "undelegate", "esetup",
         "estart", "vote", "tally", "transfer")


def trace_gen(seed: int, max_parties: int = 16, max_elections: int = 4,
              max_commands: int = 64) -> list[dict]:
    """Seeded valid trace: every command passes the real guards when emitted."""
    rng = random.Random(seed)
    n = rng.randint(3, max_parties)
    tokens = [rng.randint(0, 20) for _ in range(n)]
    if sum(tokens) == 0:
        tokens[0] = 1
    trace = [{"verb": "setup", "tokens": tokens}]

    # Shadow of the real guards, plus intersection-semantics restrictions:
    # never re-register a delegate that still holds inbound delegations, and
    # only let delegates vote in elections they were active for at start.
    balances = list(tokens)
    locks = [0] * n
    active = [0] * n
    has_del = [False] * n
    del_target = [-1] * n
    inbound = [0] * n
    elections: dict[str, dict] = {}
    next_eid = 0

    for _ in range(rng.randint(4, max_commands - 1)):
        choices = []
        can_register = [p for p in range(n)
                        if locks[p] == 0 and active[p] == 0 and inbound[p] == 0]
        if can_register:
            choices.append("register")
        can_unregister = [p for p in range(n) if active[p] == 1]
        if can_unregister:
            choices.append("unregister")
        pool = [p for p in range(n) if active[p] == 1]
        can_delegate = [p for p in range(n)
                        if locks[p] == 0 and balances[p] >= 1 and pool]
        if can_delegate:
            choices.append("delegate")
        can_undelegate = [p for p in range(n) if has_del[p]]
        if can_undelegate:
            choices.append("undelegate")
        if len(elections) < max_elections:
            choices.append("esetup")
        startable = [e for e, st in elections.items() if st["phase"] == "Created"]
        if startable:
            choices.append("estart")
        votable = [
            (e, p) for e, st in elections.items() if st["phase"] == "Started"
            for p in range(n)
            if active[p] == 1 and p in st["active_at_start"] and not st["voted"].get(p)
        ]
        if votable:
            choices.append("vote")
        talliable = [e for e, st in elections.items() if st["phase"] == "Started"]
        if talliable:
            choices.append("tally")
        can_transfer = [
            (a, b) for a in range(n) if locks[a] == 0 and balances[a] >= 1
            for b in range(n) if b != a and locks[b] == 0
        ]
        if can_transfer:
            choices.append("transfer")
        if not choices:
            break

        verb = rng.choice(choices)
        if verb == "register":
            p = rng.choice(can_register)
            locks[p] = 1
            active[p] = 1
            trace.append({"verb": "register", "actor": p})
        elif verb == "unregister":
            p = rng.choice(can_unregister)
            locks[p] = 0
            active[p] = 0
            trace.append({"verb": "unregister", "actor": p})
        elif verb == "delegate":
            p = rng.choice(can_delegate)
            target = rng.choice(pool)
            set_size = rng.randint(1, min(len(pool), 6))
            locks[p] = 1
            has_del[p] = True
            del_target[p] = target
            inbound[target] += 1
            trace.append({"verb": "delegate", "actor": p, "target": target,
                          "set_size": set_size})
        elif verb == "undelegate":
            p = rng.choice(can_undelegate)
            locks[p] = 0
            has_del[p] = False
            inbound[del_target[p]] -= 1
            del_target[p] = -1
            trace.append({"verb": "undelegate", "actor": p})
        elif verb == "esetup":
            p = rng.randrange(n)
            eid = f"e{next_eid}"
            next_eid += 1
            elections[eid] = {"phase": "Created", "creator": p, "voted": {},
                              "active_at_start": set()}
            trace.append({"verb": "esetup", "actor": p, "eid": eid,
                          "desc": f"proposal {eid}"})
        elif verb == "estart":
            eid = rng.choice(startable)
            elections[eid]["phase"] = "Started"
            elections[eid]["active_at_start"] = {p for p in range(n) if active[p] == 1}
            trace.append({"verb": "estart", "actor": elections[eid]["creator"],
                          "eid": eid})
        elif verb == "vote":
            eid, p = rng.choice(votable)
            elections[eid]["voted"][p] = 1
            trace.append({"verb": "vote", "actor": p, "eid": eid,
                          "option": rng.randrange(3),
                          "private": rng.random() < 0.5})
        elif verb == "tally":
            eid = rng.choice(talliable)
            elections[eid]["phase"] = "Tallied"
            trace.append({"verb": "tally", "eid": eid})
        elif verb == "transfer":
            a, b = rng.choice(can_transfer)
            amount = rng.randint(1, balances[a])
            balances[a] -= amount
            balances[b] += amount
            trace.append({"verb": "transfer", "actor": a, "to": b,
                          "amount": amount})
    return trace


# ---------------------------------------------------------------------------
# Differential runner


@dataclass
class Verdict:
    equal: bool
    divergence_index: int | None = None
    detail: str = ""


def _normalize_board_events(board: Board) -> list[tuple]:
    out = []
    for ev in board.event_log:
        k, pl = ev.kind, ev.payload
        if k == "Setup":
            out.append(("setup", tuple(pl["tokens"])))
        elif k == "Registered":
            out.append(("register", pl["party"]))
        elif k == "Unregistered":
            out.append(("unregister", pl["party"]))
        elif k == "Delegated":
            out.append(("delegate", pl["party"]))
        elif k == "Undelegated":
            out.append(("undelegate", pl["party"]))
        elif k == "ElectionCreated":
            out.append(("esetup", pl["eid"], pl["desc"], pl["creator"]))
        elif k == "ElectionStarted":
            out.append(("estart", pl["eid"]))
        elif k == "Voted":
            if "choice" in pl:
                out.append(("vote", pl["eid"], pl["party"], pl["choice"]))
            else:
                out.append(("vote", pl["eid"], pl["party"]))
        elif k == "Tallied":
            out.append(("tally", pl["eid"], tuple(pl["percentages"])))
        elif k == "Transferred":
            out.append(("transfer", pl["from"], pl["to"], pl["amount"]))
        # Rejected / TransferLocked / RootRefreshed are not part of the
        # ideal model's broadcast surface.
    return out


class RealStack:
    """Board + authority + honest clients driven by trace commands.

    Every board mutation goes through a serialized command record, collected
    in self.commands, so the whole run can be replayed from the record log.
    """

    def __init__(self, group: GroupParams = DEFAULT_GROUP, rng: random.Random | None = None):
        self.group = group
        self.rng = rng if rng is not None else random.Random(0)
        self.authority = Authority(group, self.rng)
        self.board = Board(group)
        self.clients: dict[int, cl.VoterState] = {}
        self.commands: list[dict] = []

    def _apply(self, record: dict):
        self.commands.append(record)
        return self.board.apply_command(record)

    def step(self, cmd: dict):
        verb = cmd["verb"]
        b = self.board
        if verb == "setup":
            bundle = self.authority.setup(cmd["tokens"])
            self._apply({
                "op": "setup", "pk_enc": hex(bundle.pk_enc),
                "vk_sig": bundle.vk_sig.hex(), "tokens": bundle.token_list,
                "root": bundle.token_root.hex(), "sig": bundle.root_sig.hex(),
            })
            self.clients = {
                i: cl.voter_setup(bundle.token_list, i)
                for i in range(len(bundle.token_list))
            }
        elif verb == "register":
            self._apply({"op": "register", "party": cmd["actor"]})
        elif verb == "unregister":
            self._apply({"op": "unregister", "party": cmd["actor"]})
        elif verb == "delegate":
            p = cmd["actor"]
            state = self.clients[p]
            state.tokens = b.balances[p]
            pool = [i for i in range(b.num_parties) if b.active[i] == 1]
            token_list = [b.balances[i] for i in range(b.num_parties)]
            bundle = cl.build_delegation(
                state, cmd["target"], cmd["set_size"], pool,
                b.pk_enc, token_list, self.rng, self.group,
            )
            self._apply(bundle.to_command(p))
            cl.mark_delegated(state, bundle)
        elif verb == "undelegate":
            p = cmd["actor"]
            state = self.clients[p]
            self._apply(cl.build_undelegation(state))
            cl.mark_undelegated(state)
        elif verb == "esetup":
            self._apply({"op": "election_setup", "party": cmd["actor"],
                         "eid": cmd["eid"], "desc": cmd.get("desc", "")})
        elif verb == "estart":
            self._apply({"op": "election_start", "party": cmd["actor"],
                         "eid": cmd["eid"]})
        elif verb == "vote":
            p, eid = cmd["actor"], cmd["eid"]
            el = b.elections[eid]
            state = self.clients[p]
            if cmd.get("private"):
                call = cl.cast_private_vote(
                    state, eid, cmd["option"], b.params.num_options,
                    el.snapshot_powers, b.pk_enc, self.rng, self.group,
                )
            else:
                call = cl.cast_public_vote(
                    state, eid, cmd["option"], b.params.num_options,
                    el.snapshot_powers,
                )
            self._apply(call)
        elif verb == "tally":
            eid = cmd["eid"]
            result, proof = self.authority.tally_decrypt(eid, b.elections[eid].tallies)
            self._apply({"op": "tally", "eid": eid,
                         "percentages": result.percentages,
                         "dec_proof": proof.to_bytes().hex()})
        elif verb == "transfer":
            self._apply({"op": "transfer", "from": cmd["actor"],
                         "to": cmd["to"], "amount": cmd["amount"]})
            root, sig = self.authority.refresh_root(
                [{"from": cmd["actor"], "to": cmd["to"], "amount": cmd["amount"]}]
            )
            self._apply({"op": "refresh_root", "root": root.hex(),
                         "sig": sig.hex()})
        else:
            raise ValueError(f"unknown verb {verb!r}")


def differential_run(trace: list[dict], group: GroupParams = DEFAULT_GROUP,
                     seed: int = 0, fault=None) -> Verdict:
    """Replay the trace through the real stack and the ideal model.

    fault, when given, is a test-only hook fault(board, index, command) called
    before each step to corrupt the real side.
    """
    real = RealStack(group, random.Random(seed ^ 0x5EED))
    ideal = IdealState()
    for i, cmd in enumerate(trace):
        if fault is not None:
            fault(real.board, i, cmd)
        try:
            real.step(cmd)
        except BoardError as e:
            return Verdict(False, i, f"real stack rejected {cmd['verb']}: {e.reason}")
        ideal_step(ideal, cmd)
    real_tx = _normalize_board_events(real.board)
    ideal_tx = ideal.events
    for i, (a, b) in enumerate(zip(real_tx, ideal_tx)):
        if a != b:
            return Verdict(False, i, f"event {i}: real {a!r} != ideal {b!r}")
    if len(real_tx) != len(ideal_tx):
        return Verdict(False, min(len(real_tx), len(ideal_tx)),
                       f"transcript lengths differ: {len(real_tx)} vs {len(ideal_tx)}")
    return Verdict(True)
