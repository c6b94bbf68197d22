// Wire types mirroring the orchestrator API. The console renders these
// verbatim: the server is the only authority on phase and step.

export type SessionPhase = 'PRELIMINARY' | 'EXECUTION' | 'CLOSURE' | 'ARCHIVED';

export type CycleStepName =
  | 'PRESENTATION'
  | 'MODEL_APPLICATION'
  | 'INTERPRETATION'
  | 'DISCUSSION'
  | 'CONCLUSIONS';

export interface CourseOfAction {
  id: string;
  title: string;
  rationale: string;
  paramDeltas: Record<string, Record<string, number>>;
  leadTime: number;
  costLabel: string;
}

export interface CurrentEvent {
  event: number;
  phase: string;
  step: CycleStepName;
  narrative: string;
  contextNotes: string;
  guidingQuestions: string[];
  courses: CourseOfAction[];
  chosenCourse: string | null;
}

export interface CycleSummary {
  event: number;
  step: CycleStepName;
  concluded: boolean;
  chosenCourse: string | null;
  discussionNotes: string[];
  conclusionNotes: string[];
}

export interface SessionView {
  sessionId: string;
  scenarioId: string;
  scenarioTitle: string;
  phase: SessionPhase;
  participants: { np: number; no: number; gs: string };
  eventCount: number;
  runsPerEvent: number;
  mode: string;
  concludedEvents: number;
  currentEvent: CurrentEvent | null;
  cycles: CycleSummary[];
  surveyCount: number;
  stateHash: string;
}

export interface Snapshot {
  time: number;
  networkSituation: {
    histogram: Record<string, number>;
    healthyFraction: number;
  };
  serviceAvailability: number;
  cyberRisk: number;
}

export interface TrajectoryWire {
  runId: number;
  mode: string;
  seed: number | null;
  samples: Snapshot[];
}

export interface RunsResponse {
  event: number;
  runs: TrajectoryWire[];
}

export interface ScoreWire {
  score: number;
  meanServiceAvailability: number;
  meanCyberRisk: number;
  perRun: number[];
}

export interface WhatIfResponse {
  coaId: string | null;
  horizon: number;
  trajectories: TrajectoryWire[];
  score: ScoreWire;
}

export interface StreamRecord {
  seq: number;
  event: number;
  runId: number;
  snapshot: Snapshot;
}

export interface ApiErrorBody {
  error: { code: string; message: string };
}
