// Thin typed client over the orchestrator HTTP API.

import type {
  ApiErrorBody,
  RunsResponse,
  SessionView,
  WhatIfResponse,
} from './types.js';

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.code = code;
    this.status = status;
  }
}

export type AdvanceAction =
  | 'BEGIN_EXECUTION'
  | 'NEXT_STEP'
  | 'SUBMIT_COA'
  | 'SUBMIT_NOTES'
  | 'BEGIN_CLOSURE'
  | 'ARCHIVE';

export class OrchestratorClient {
  readonly baseUrl: string;
  private readonly fetchImpl: typeof fetch;

  constructor(baseUrl: string, fetchImpl: typeof fetch = fetch) {
    this.baseUrl = baseUrl.replace(/\/+$/, '');
    this.fetchImpl = fetchImpl;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? undefined : { 'content-type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    if (!response.ok) {
      let code = 'http_error';
      let message = `${response.status} ${response.statusText}`;
      try {
        const parsed = JSON.parse(text) as ApiErrorBody;
        code = parsed.error.code;
        message = parsed.error.message;
      } catch {
        // non-JSON error body: keep the status line
      }
      throw new ApiError(response.status, code, message);
    }
    return JSON.parse(text) as T;
  }

  createSession(
    scenarioId: string,
    participants: { np: number; no: number; gs: string },
    sessionId?: string,
  ): Promise<SessionView> {
    return this.request('POST', '/sessions', { scenarioId, participants, sessionId });
  }

  getSession(sessionId: string): Promise<SessionView> {
    return this.request('GET', `/sessions/${sessionId}`);
  }

  advance(
    sessionId: string,
    action: AdvanceAction,
    payload: Record<string, unknown> = {},
  ): Promise<SessionView> {
    return this.request('POST', `/sessions/${sessionId}/advance`, { action, payload });
  }

  whatIf(sessionId: string, coaId: string | null, horizon: number): Promise<WhatIfResponse> {
    return this.request('POST', `/sessions/${sessionId}/whatif`, { coaId, horizon });
  }

  runs(sessionId: string, event: number): Promise<RunsResponse> {
    return this.request('GET', `/sessions/${sessionId}/runs/${event}`);
  }

  submitSurveys(sessionId: string, rows: (number | string)[][]): Promise<{ accepted: number; total: number }> {
    return this.request('POST', `/sessions/${sessionId}/surveys`, { rows });
  }

  reportUrl(sessionId: string): string {
    return `${this.baseUrl}/sessions/${sessionId}/report`;
  }
}
