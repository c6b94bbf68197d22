// Minimal SSE consumer over fetch streams, with Last-Event-ID resume.
// Snapshots render strictly in publication order; a reconnect resumes from
// the last seen sequence number, so records are never duplicated.

export interface SseEvent {
  id: string | null;
  data: string;
}

/** Incremental parser for a text/event-stream byte feed. */
export class SseParser {
  private buffer = '';
  private currentId: string | null = null;
  private dataLines: string[] = [];

  push(chunk: string): SseEvent[] {
    this.buffer += chunk;
    const events: SseEvent[] = [];
    let index: number;
    while ((index = this.buffer.indexOf('\n')) >= 0) {
      const line = this.buffer.slice(0, index).replace(/\r$/, '');
      this.buffer = this.buffer.slice(index + 1);
      if (line === '') {
        if (this.dataLines.length > 0) {
          events.push({ id: this.currentId, data: this.dataLines.join('\n') });
        }
        this.dataLines = [];
        continue;
      }
      if (line.startsWith(':')) continue; // keepalive comment
      if (line.startsWith('id:')) {
        this.currentId = line.slice(3).trim();
      } else if (line.startsWith('data:')) {
        this.dataLines.push(line.slice(5).replace(/^ /, ''));
      }
    }
    return events;
  }
}

export interface StreamSubscription {
  close(): void;
  done: Promise<void>;
}

export interface StreamOptions {
  /** Resume point: only records with seq > after are delivered. */
  after?: number;
  /** Close the server side after this many records (0 = unbounded). */
  limit?: number;
  /** Server closes after this many idle seconds (0 = never). */
  idleTimeout?: number;
  fetchImpl?: typeof fetch;
}

export function subscribeStream<T>(
  baseUrl: string,
  sessionId: string,
  onRecord: (record: T, id: string | null) => void,
  options: StreamOptions = {},
): StreamSubscription {
  const controller = new AbortController();
  const fetchImpl = options.fetchImpl ?? fetch;
  const params = new URLSearchParams();
  if (options.after) params.set('after', String(options.after));
  if (options.limit) params.set('limit', String(options.limit));
  if (options.idleTimeout) params.set('idleTimeout', String(options.idleTimeout));
  const query = params.toString();
  const url = `${baseUrl.replace(/\/+$/, '')}/sessions/${sessionId}/stream${query ? `?${query}` : ''}`;

  const done = (async () => {
    const response = await fetchImpl(url, { signal: controller.signal });
    if (!response.ok || response.body === null) {
      throw new Error(`stream failed: ${response.status}`);
    }
    const reader = response.body.getReader();
    const decoder = new TextDecoder();
    const parser = new SseParser();
    try {
      for (;;) {
        const { done: finished, value } = await reader.read();
        if (finished) return;
        for (const event of parser.push(decoder.decode(value, { stream: true }))) {
          onRecord(JSON.parse(event.data) as T, event.id);
        }
      }
    } finally {
      reader.releaseLock();
    }
  })().catch((error: unknown) => {
    if (!controller.signal.aborted) throw error;
  });

  return {
    close: () => controller.abort(),
    done,
  };
}
