// DOM wiring for the governance console. One session per tab: pick a party,
// act through the gated buttons, watch the event feed and election cards
// update by polling. Delegation bundles returned by the node are cached
// per party in this tab only, for later undelegation.

import { ApiError, DelegationBundle, NodeApi } from './api';
import { electionCard } from './elections';
import { EventFeed } from './poll';
import { ANONYMITY_PRESETS, canVote, delegatePool, sessionModel } from './session';
import { optionName } from './tally';

const NODE_URL = new URLSearchParams(location.search).get('node') ?? 'http://127.0.0.1:8400';

const api = new NodeApi(NODE_URL);
const bundleCache = new Map<number, DelegationBundle>();

let selectedParty: number | null = null;

function el<T extends HTMLElement>(id: string): T {
    return document.getElementById(id) as T;
}

function showError(e: unknown): void {
    el('error').textContent = e instanceof ApiError ? e.reason : String(e);
}

async function refresh(): Promise<void> {
    el('error').textContent = '';
    const state = await api.state();
    if (!state.initialized) {
        el('status').textContent = 'node not initialized';
        return;
    }

    const partySel = el<HTMLSelectElement>('party');
    if (partySel.options.length !== state.num_parties) {
        partySel.innerHTML = '';
        for (let p = 0; p < state.num_parties; p++) {
            partySel.add(new Option(`party ${p}`, String(p)));
        }
    }
    selectedParty = Number(partySel.value);

    const session = sessionModel(state, selectedParty);
    el('status').textContent =
        `party ${session.party}: ${session.role}, balance ${session.balance}` +
        (session.locked ? ', tokens locked' : '') +
        (session.delegated ? ', delegation pending' : '');

    el<HTMLButtonElement>('register').disabled = !session.canRegister;
    el<HTMLButtonElement>('unregister').disabled = !session.canUnregister;
    el<HTMLButtonElement>('delegate').disabled = !session.canDelegate;
    el<HTMLButtonElement>('undelegate').disabled = !session.canUndelegate;

    const targetSel = el<HTMLSelectElement>('target');
    targetSel.innerHTML = '';
    for (const d of delegatePool(state)) {
        targetSel.add(new Option(`party ${d}`, String(d)));
    }

    const cards = el('elections');
    cards.innerHTML = '';
    for (const eid of state.elections) {
        const card = electionCard(await api.election(eid), selectedParty);
        const div = document.createElement('div');
        div.className = 'card';
        div.textContent = `${card.eid} [${card.phase}] ${card.desc} ` +
            (card.result !== null ? card.result : `(${card.myVote})`);
        cards.appendChild(div);
    }
}

function guarded(action: () => Promise<unknown>): () => void {
    return () => {
        action().then(refresh).catch(showError);
    };
}

function init(): void {
    const anonSel = el<HTMLSelectElement>('anonymity');
    for (const size of ANONYMITY_PRESETS) {
        anonSel.add(new Option(String(size), String(size)));
    }
    anonSel.add(new Option('custom', 'custom'));

    el('party').addEventListener('change', () => void refresh());
    el('register').addEventListener('click',
        guarded(() => api.register(selectedParty!)));
    el('unregister').addEventListener('click',
        guarded(() => api.unregister(selectedParty!)));

    el('delegate').addEventListener('click', guarded(async () => {
        const target = Number(el<HTMLSelectElement>('target').value);
        const raw = anonSel.value === 'custom'
            ? prompt('anonymity set size') ?? '1'
            : anonSel.value;
        const out = await api.delegate(selectedParty!, target, Number(raw));
        bundleCache.set(selectedParty!, out.bundle);
    }));

    el('undelegate').addEventListener('click', guarded(async () => {
        await api.undelegate(selectedParty!, bundleCache.get(selectedParty!));
        bundleCache.delete(selectedParty!);
    }));

    el('vote').addEventListener('click', guarded(async () => {
        const eid = el<HTMLInputElement>('vote-eid').value;
        const election = await api.election(eid);
        const state = await api.state();
        const session = sessionModel(state, selectedParty!);
        if (!canVote(election, session)) {
            throw new Error('voting closed for this party');
        }
        const choice = Number(el<HTMLSelectElement>('choice').value);
        const priv = el<HTMLInputElement>('private').checked;
        return api.vote(selectedParty!, eid, choice, priv);
    }));

    const choiceSel = el<HTMLSelectElement>('choice');
    for (let j = 0; j < 3; j++) {
        choiceSel.add(new Option(optionName(j), String(j)));
    }

    const feed = new EventFeed(api, (events) => {
        const log = el('feed');
        for (const ev of events) {
            const line = document.createElement('div');
            line.textContent = `#${ev.seq} ${ev.kind} ${JSON.stringify(ev.payload)}`;
            log.appendChild(line);
        }
        log.scrollTop = log.scrollHeight;
        void refresh();
    });
    feed.start();

    void refresh();
}

document.addEventListener('DOMContentLoaded', init);
