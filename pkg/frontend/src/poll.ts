// Incremental event feed: polls /events?from_seq past the last seen sequence
// number and hands new events to the subscriber.

import { BoardEvent, NodeApi } from './api';

export class EventFeed {
    private nextSeq = 0;
    private timer: ReturnType<typeof setInterval> | null = null;

    constructor(
        private api: NodeApi,
        private onEvents: (events: BoardEvent[]) => void,
        private intervalMs = 2000,
    ) {}

    async tick(): Promise<void> {
        const events = await this.api.events(this.nextSeq);
        if (events.length > 0) {
            this.nextSeq = events[events.length - 1].seq + 1;
            this.onEvents(events);
        }
    }

    start(): void {
        if (this.timer !== null) return;
        void this.tick();
        this.timer = setInterval(() => void this.tick().catch(() => {}), this.intervalMs);
    }

    stop(): void {
        if (this.timer !== null) {
            clearInterval(this.timer);
            this.timer = null;
        }
    }
}
