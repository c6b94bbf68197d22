// Console state: a thin mirror of the server session plus chart/form state.
// The UI never computes model results locally; every number it renders came
// from a server response, and the displayed step label is always the
// server-reported cycle step.

import { ApiError, OrchestratorClient } from './api.js';
import {
  addOverlay,
  buildChartSeries,
  ChartSeries,
  discardOverlay,
  pinOverlay,
} from './series.js';
import type {
  ScoreWire,
  SessionView,
  StreamRecord,
  TrajectoryWire,
  WhatIfResponse,
} from './types.js';
import {
  RowValidation,
  SurveyColumn,
  toWireRow,
  validateRow,
} from './validation.js';

export class BusyError extends Error {
  constructor() {
    super('another action is already in flight');
  }
}

export class SurveyNotValidError extends Error {
  readonly errors: RowValidation['errors'];

  constructor(errors: RowValidation['errors']) {
    super('survey row has out-of-range values');
    this.errors = errors;
  }
}

export interface WhatIfOverlayState {
  label: string;
  coaId: string | null;
  score: ScoreWire;
  trajectories: TrajectoryWire[];
}

export class ConsoleViewModel {
  readonly client: OrchestratorClient;
  private view_: SessionView | null = null;
  private charts_: ChartSeries[] = [];
  private overlays_: WhatIfOverlayState[] = [];
  private busy_ = false;
  private surveyValues: Partial<Record<SurveyColumn, string | number>> = {};
  private streamSeq_ = 0;
  private streamLog_: StreamRecord[] = [];
  private listeners: (() => void)[] = [];

  constructor(client: OrchestratorClient) {
    this.client = client;
  }

  // -- observation ------------------------------------------------------------

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  get view(): SessionView | null {
    return this.view_;
  }

  get charts(): ChartSeries[] {
    return this.charts_;
  }

  get overlays(): WhatIfOverlayState[] {
    return this.overlays_;
  }

  get busy(): boolean {
    return this.busy_;
  }

  get streamSeq(): number {
    return this.streamSeq_;
  }

  get streamLog(): StreamRecord[] {
    return this.streamLog_;
  }

  /** The label the step indicator renders: exactly the server's cycle step. */
  stepLabel(): string {
    const view = this.view_;
    if (view === null) return '(no session)';
    if (view.currentEvent !== null) return view.currentEvent.step;
    return view.phase;
  }

  /** Next lifecycle action the Advance button will issue, or null. */
  nextAction(): 'BEGIN_EXECUTION' | 'NEXT_STEP' | 'BEGIN_CLOSURE' | null {
    const view = this.view_;
    if (view === null) return null;
    if (view.phase === 'PRELIMINARY') return 'BEGIN_EXECUTION';
    if (view.phase === 'EXECUTION') {
      return view.currentEvent !== null ? 'NEXT_STEP' : 'BEGIN_CLOSURE';
    }
    return null;
  }

  whatIfEnabled(): boolean {
    return this.view_?.currentEvent?.step === 'DISCUSSION';
  }

  // -- mutations ---------------------------------------------------------------

  private async mutate<T>(operation: () => Promise<T>): Promise<T> {
    if (this.busy_) throw new BusyError();
    this.busy_ = true;
    try {
      return await operation();
    } finally {
      this.busy_ = false;
      this.notify();
    }
  }

  private async applyView(view: SessionView): Promise<void> {
    const previousEvent = this.view_?.currentEvent?.event ?? null;
    this.view_ = view;
    const current = view.currentEvent;
    if (current !== null && current.event !== previousEvent) {
      this.charts_ = [];
      this.overlays_ = [];
    }
    const stepHasRuns =
      current !== null && current.step !== 'PRESENTATION';
    if (stepHasRuns && this.charts_.length === 0 && current !== null) {
      const runs = await this.client.runs(view.sessionId, current.event);
      this.charts_ = buildChartSeries(runs.runs);
    }
  }

  async createSession(
    scenarioId: string,
    participants: { np: number; no: number; gs: string },
    sessionId?: string,
  ): Promise<SessionView> {
    return this.mutate(async () => {
      const view = await this.client.createSession(scenarioId, participants, sessionId);
      await this.applyView(view);
      return view;
    });
  }

  async attach(sessionId: string): Promise<SessionView> {
    return this.mutate(async () => {
      const view = await this.client.getSession(sessionId);
      await this.applyView(view);
      return view;
    });
  }

  async refresh(): Promise<SessionView> {
    const view = this.requireView();
    const fresh = await this.client.getSession(view.sessionId);
    await this.applyView(fresh);
    this.notify();
    return fresh;
  }

  private requireView(): SessionView {
    if (this.view_ === null) throw new Error('no session attached');
    return this.view_;
  }

  /** Advance button: one server transition, view re-rendered from response. */
  async advanceStep(): Promise<SessionView> {
    const action = this.nextAction();
    if (action === null) throw new Error('no further transitions from this phase');
    const sessionId = this.requireView().sessionId;
    return this.mutate(async () => {
      const view = await this.client.advance(sessionId, action);
      await this.applyView(view);
      return view;
    });
  }

  async submitCourse(coaId: string | null): Promise<SessionView> {
    const sessionId = this.requireView().sessionId;
    return this.mutate(async () => {
      const view = await this.client.advance(sessionId, 'SUBMIT_COA', { coaId });
      await this.applyView(view);
      return view;
    });
  }

  async submitNotes(kind: 'general' | 'discussion' | 'conclusion', text: string): Promise<void> {
    const sessionId = this.requireView().sessionId;
    await this.mutate(async () => {
      const view = await this.client.advance(sessionId, 'SUBMIT_NOTES', { kind, text });
      await this.applyView(view);
    });
  }

  /** What-if projection; the result overlays the canonical charts. */
  async runWhatIf(coaId: string | null, horizon: number): Promise<WhatIfResponse> {
    const view = this.requireView();
    if (!this.whatIfEnabled()) {
      throw new Error('what-if projections are available at the DISCUSSION step');
    }
    return this.mutate(async () => {
      const result = await this.client.whatIf(view.sessionId, coaId, horizon);
      const label = coaId === null ? 'baseline continuation' : coaId;
      this.overlays_ = [
        ...this.overlays_.filter((o) => o.label !== label),
        { label, coaId, score: result.score, trajectories: result.trajectories },
      ];
      this.charts_ = addOverlay(
        discardOverlay(this.charts_, label),
        label,
        coaId,
        result.trajectories,
      );
      return result;
    });
  }

  discardWhatIf(label: string): void {
    this.overlays_ = this.overlays_.filter((o) => o.label !== label);
    this.charts_ = discardOverlay(this.charts_, label);
    this.notify();
  }

  pinWhatIf(label: string): void {
    this.charts_ = pinOverlay(this.charts_, label);
    this.notify();
  }

  // -- surveys -------------------------------------------------------------------

  setSurveyValue(column: SurveyColumn, value: string | number): void {
    this.surveyValues[column] = value;
    this.notify();
  }

  surveyValidation(): RowValidation {
    return validateRow(this.surveyValues);
  }

  /** Rejects locally (no network) while any control is out of range. */
  async submitSurveyRow(): Promise<{ accepted: number; total: number }> {
    const validation = this.surveyValidation();
    if (!validation.isValid) {
      throw new SurveyNotValidError(validation.errors);
    }
    const sessionId = this.requireView().sessionId;
    const row = toWireRow(this.surveyValues);
    return this.mutate(async () => {
      const result = await this.client.submitSurveys(sessionId, [row]);
      this.surveyValues = {};
      const view = await this.client.getSession(sessionId);
      await this.applyView(view);
      return result;
    });
  }

  // -- stream ----------------------------------------------------------------------

  /**
   * Feed one stream record. Records must arrive in publication order; a
   * record at or before the resume point is dropped (no duplication after
   * reconnect).
   */
  ingestStreamRecord(record: StreamRecord): void {
    if (record.seq <= this.streamSeq_) return;
    this.streamSeq_ = record.seq;
    this.streamLog_.push(record);
  }
}

export function isConflict(error: unknown): boolean {
  return error instanceof ApiError && (error.status === 409 || error.code === 'conflict');
}
