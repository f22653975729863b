// Thin typed client over the node's JSON API. Every exchange is passed to an
// optional recorder so tests (and the privacy audit) can inspect exactly what
// crossed the wire.

export interface BoardState {
    initialized: boolean;
    num_parties: number;
    num_options: number;
    balances: Record<string, number>;
    locks: Record<string, number>;
    active: Record<string, number>;
    delegated: Record<string, boolean>;
    token_root: string;
    stale_root: boolean;
    elections: string[];
    state_hash: string;
}

export interface ElectionView {
    eid: string;
    desc: string;
    creator: number;
    phase: 'Created' | 'Started' | 'Tallied';
    voted: number[];
    snapshot_root: string | null;
    result: number[] | null;
    no_votes: boolean | null;
}

export interface BoardEvent {
    seq: number;
    kind: string;
    payload: Record<string, unknown>;
}

export interface DelegationBundle {
    anon_set: number[];
    ct_vec: string[];
}

export interface Exchange {
    method: string;
    path: string;
    request: unknown;
    response: unknown;
}

export class ApiError extends Error {
    constructor(public status: number, public reason: string) {
        super(`${status} ${reason}`);
    }
}

export class NodeApi {
    constructor(
        private baseUrl: string,
        private recorder?: (ex: Exchange) => void,
    ) {
        this.baseUrl = baseUrl.replace(/\/$/, '');
    }

    private async call<T>(method: string, path: string, body?: unknown): Promise<T> {
        const res = await fetch(this.baseUrl + path, {
            method,
            headers: body !== undefined ? { 'content-type': 'application/json' } : undefined,
            body: body !== undefined ? JSON.stringify(body) : undefined,
        });
        const data = await res.json();
        this.recorder?.({ method, path, request: body ?? null, response: data });
        if (!res.ok) {
            throw new ApiError(res.status, (data as { detail?: string }).detail ?? res.statusText);
        }
        return data as T;
    }

    setup(tokens: number[]): Promise<BoardEvent> {
        return this.call('POST', '/setup', { tokens });
    }

    register(party: number): Promise<BoardEvent> {
        return this.call('POST', `/parties/${party}/register`, {});
    }

    unregister(party: number): Promise<BoardEvent> {
        return this.call('POST', `/parties/${party}/unregister`, {});
    }

    // The target leaves the browser exactly once, here, on the submitting
    // user's own request; nothing the node publishes afterwards contains it.
    delegate(party: number, target: number, setSize: number):
            Promise<{ event: BoardEvent; bundle: DelegationBundle }> {
        return this.call('POST', `/parties/${party}/delegate`,
            { target, set_size: setSize });
    }

    undelegate(party: number, bundle?: DelegationBundle): Promise<BoardEvent> {
        return this.call('POST', `/parties/${party}/undelegate`, bundle ?? {});
    }

    createElection(party: number, eid: string, desc = ''): Promise<BoardEvent> {
        return this.call('POST', '/elections', { party, eid, desc });
    }

    startElection(party: number, eid: string): Promise<BoardEvent> {
        return this.call('POST', `/elections/${eid}/start`, { party });
    }

    vote(party: number, eid: string, choice: number, priv: boolean): Promise<BoardEvent> {
        return this.call('POST', `/elections/${eid}/vote`,
            { party, choice, private: priv });
    }

    tally(eid: string): Promise<BoardEvent> {
        return this.call('POST', `/elections/${eid}/tally`);
    }

    transfer(from: number, to: number, amount: number): Promise<BoardEvent> {
        return this.call('POST', '/transfer', { from, to, amount });
    }

    state(): Promise<BoardState> {
        return this.call('GET', '/state');
    }

    election(eid: string): Promise<ElectionView> {
        return this.call('GET', `/elections/${eid}`);
    }

    events(fromSeq = 0): Promise<BoardEvent[]> {
        return this.call('GET', `/events?from_seq=${fromSeq}`);
    }
}
