// Flash banner queue: server-rendered texts shown briefly, verbatim.

import type { FlashPayload } from "./types.js";

export class FlashQueue {
  private lastSeen = 0;
  private active: FlashPayload[] = [];

  constructor(private holdMs = 4000, private onChange: (texts: string[]) => void = () => {}) {}

  get lastSeenId(): number {
    return this.lastSeen;
  }

  // Prime the cursor so a page load doesn't replay the whole history.
  primeTo(id: number): void {
    this.lastSeen = Math.max(this.lastSeen, id);
  }

  push(flashes: FlashPayload[]): void {
    for (const flash of flashes) {
      if (flash.id <= this.lastSeen) continue;
      this.lastSeen = flash.id;
      this.active.push(flash);
      setTimeout(() => this.expire(flash.id), this.holdMs);
    }
    this.emit();
  }

  private expire(id: number): void {
    this.active = this.active.filter((f) => f.id !== id);
    this.emit();
  }

  texts(): string[] {
    return this.active.map((f) => f.text);
  }

  private emit(): void {
    this.onChange(this.texts());
  }
}
