// Election cards for the results panel. Percentages are shown only once the
// election reaches the Tallied phase; before that the card shows the phase
// and whether the selected party already voted.

import { ElectionView } from './api';
import { formatTally } from './tally';

export interface ElectionCard {
    eid: string;
    desc: string;
    phase: string;
    myVote: 'voted' | 'not voted' | 'n/a';
    result: string | null;
}

export function electionCard(el: ElectionView, party: number | null): ElectionCard {
    let myVote: ElectionCard['myVote'] = 'n/a';
    if (party !== null && el.phase !== 'Created') {
        myVote = el.voted.includes(party) ? 'voted' : 'not voted';
    }
    return {
        eid: el.eid,
        desc: el.desc,
        phase: el.phase,
        myVote,
        result: el.phase === 'Tallied' && el.result !== null
            ? formatTally(el.result, Boolean(el.no_votes))
            : null,
    };
}
