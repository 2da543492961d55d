// Test doubles: a transport that records every request, and a minimal
// element stub so view classes can run without a DOM.

import type { Transport } from "../src/client.js";

export interface RecordedRequest {
  method: string;
  path: string;
  body?: unknown;
}

export class MockTransport implements Transport {
  requests: RecordedRequest[] = [];
  responses = new Map<string, unknown>();

  respond(method: string, pathPrefix: string, payload: unknown): void {
    this.responses.set(`${method} ${pathPrefix}`, payload);
  }

  async request(method: string, path: string, body?: unknown): Promise<unknown> {
    this.requests.push({ method, path, body });
    for (const [key, payload] of this.responses) {
      const [m, prefix] = key.split(" ", 2);
      if (m === method && path.startsWith(prefix)) return structuredClone(payload);
    }
    return {};
  }

  mutations(): RecordedRequest[] {
    return this.requests.filter((r) => r.method !== "GET");
  }
}

export class FakeElement {
  innerHTML = "";
  classList = {
    add: () => undefined,
    remove: () => undefined,
    toggle: () => undefined,
  };
  addEventListener(): void {
    /* views attach listeners; scripted tests call intents directly */
  }
}

export function asRoot(fake: FakeElement): HTMLElement {
  return fake as unknown as HTMLElement;
}
