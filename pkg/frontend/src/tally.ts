// Result rendering. Percentages arrive as basis points; formatting works on
// integers so the output matches the command-line client character for
// character.

export const OPTION_NAMES = ['yes', 'no', 'abstain'];

export function optionName(j: number): string {
    return j < OPTION_NAMES.length ? OPTION_NAMES[j] : `opt${j}`;
}

function bpToPercent(bp: number): string {
    return `${Math.floor(bp / 100)}.${String(bp % 100).padStart(2, '0')}%`;
}

export function formatTally(percentages: number[], noVotes: boolean): string {
    if (noVotes) {
        return 'no votes';
    }
    return percentages
        .map((bp, j) => `${optionName(j)} ${bpToPercent(bp)}`)
        .join(' ');
}
