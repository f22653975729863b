// Per-party view model and action gating, derived from GET /state. The four
// lock/active states decide which buttons are live:
//   unlocked+inactive  voter that has not delegated
//   locked+active      registered delegate
//   locked+inactive    delegator (tokens locked behind a delegation)
//   unlocked+active    never valid; the board forbids it

import { BoardState, ElectionView } from './api';

export type Role = 'voter' | 'delegate' | 'delegator';

export interface SessionModel {
    party: number;
    balance: number;
    locked: boolean;
    active: boolean;
    delegated: boolean;
    role: Role;
    canRegister: boolean;
    canUnregister: boolean;
    canDelegate: boolean;
    canUndelegate: boolean;
}

export const ANONYMITY_PRESETS = [5, 10, 20];

export function sessionModel(state: BoardState, party: number): SessionModel {
    const key = String(party);
    const locked = state.locks[key] === 1;
    const active = state.active[key] === 1;
    const delegated = Boolean(state.delegated[key]);
    if (!locked && active) {
        throw new Error(`party ${party} is unlocked+active; board state is corrupt`);
    }
    const role: Role = active ? 'delegate' : delegated ? 'delegator' : 'voter';
    return {
        party,
        balance: state.balances[key],
        locked,
        active,
        delegated,
        role,
        canRegister: !locked && !active,
        canUnregister: locked && active,
        canDelegate: !locked && !delegated,
        canUndelegate: locked && delegated,
    };
}

// Delegate picker: only registered delegates can receive power.
export function delegatePool(state: BoardState): number[] {
    return Object.keys(state.active)
        .filter((k) => state.active[k] === 1)
        .map(Number)
        .sort((a, b) => a - b);
}

export function canVote(el: ElectionView, session: SessionModel): boolean {
    return el.phase === 'Started' && !el.voted.includes(session.party);
}
