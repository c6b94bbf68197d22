// DOM wiring for the facilitator console. One session on one shared screen:
// panels switch with the server-reported step, every control is a native
// button or input (keyboard operable), and one mutation runs at a time.

import { OrchestratorClient } from './api.js';
import { renderChart } from './charts.js';
import { subscribeStream } from './sse.js';
import type { SessionView, StreamRecord } from './types.js';
import {
  BusyError,
  ConsoleViewModel,
  SurveyNotValidError,
  isConflict,
} from './viewmodel.js';
import { COLUMN_LABELS, SURVEY_COLUMNS, BINARY_COLUMNS, SurveyColumn } from './validation.js';

const app = document.querySelector<HTMLDivElement>('#app');
if (app === null) throw new Error('missing #app container');

const baseUrl = new URLSearchParams(location.search).get('api') ?? 'http://127.0.0.1:8000';
const client = new OrchestratorClient(baseUrl);
const vm = new ConsoleViewModel(client);

let statusLine = '';
let streamSub: { close(): void } | null = null;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  node.append(...children);
  return node;
}

function setStatus(text: string): void {
  statusLine = text;
  render();
}

async function guarded(action: () => Promise<unknown>): Promise<void> {
  try {
    await action();
    statusLine = '';
  } catch (error) {
    if (error instanceof BusyError) {
      statusLine = 'an action is already in flight; one transition at a time';
    } else if (error instanceof SurveyNotValidError) {
      statusLine = Object.values(error.errors).join('; ');
    } else if (isConflict(error)) {
      statusLine = `server rejected the transition: ${(error as Error).message}`;
    } else {
      statusLine = (error as Error).message;
    }
  }
  render();
}

function connectStream(view: SessionView): void {
  streamSub?.close();
  streamSub = subscribeStream<StreamRecord>(
    baseUrl,
    view.sessionId,
    (record) => vm.ingestStreamRecord(record),
    { after: vm.streamSeq },
  );
}

function sessionControls(): HTMLElement {
  const scenarioInput = el('input', {
    id: 'scenario-id', value: 'maersk-notpetya-12', 'aria-label': 'scenario id',
  });
  const createButton = el('button', { id: 'create-session' }, 'Create session');
  createButton.addEventListener('click', () =>
    guarded(async () => {
      const view = await vm.createSession(scenarioInput.value, { np: 10, no: 0, gs: '3-4' });
      connectStream(view);
    }),
  );
  const attachInput = el('input', { id: 'attach-id', placeholder: 'session id', 'aria-label': 'session id' });
  const attachButton = el('button', { id: 'attach-session' }, 'Attach');
  attachButton.addEventListener('click', () =>
    guarded(async () => {
      const view = await vm.attach(attachInput.value.trim());
      connectStream(view);
    }),
  );
  return el('div', { class: 'controls' }, scenarioInput, createButton, attachInput, attachButton);
}

function advanceBar(view: SessionView): HTMLElement {
  const stepBadge = el('span', { id: 'step-label', class: 'badge' }, vm.stepLabel());
  const advance = el('button', { id: 'advance' }, 'Advance');
  if (vm.nextAction() === null || vm.busy) advance.setAttribute('disabled', '');
  advance.addEventListener('click', () => guarded(() => vm.advanceStep()));
  return el(
    'div',
    { class: 'advance-bar' },
    el('span', {}, `phase ${view.phase}`),
    stepBadge,
    el('span', {}, view.currentEvent ? `event ${view.currentEvent.event}/${view.eventCount}` : ''),
    advance,
  );
}

function presentationPanel(view: SessionView): HTMLElement {
  const current = view.currentEvent;
  if (current === null) return el('div');
  return el(
    'section',
    { class: 'panel', id: 'panel-presentation' },
    el('h2', {}, `Event ${current.event}: ${current.phase}`),
    el('p', {}, current.narrative),
    current.contextNotes ? el('p', { class: 'context' }, current.contextNotes) : '',
  );
}

function chartsPanel(): HTMLElement {
  const panel = el('section', { class: 'panel', id: 'panel-charts' });
  for (const chart of vm.charts) {
    panel.appendChild(renderChart(chart));
  }
  for (const overlay of vm.overlays) {
    const pin = el('button', {}, `Pin ${overlay.label}`);
    pin.addEventListener('click', () => vm.pinWhatIf(overlay.label));
    const discard = el('button', {}, `Discard ${overlay.label}`);
    discard.addEventListener('click', () => vm.discardWhatIf(overlay.label));
    panel.appendChild(
      el(
        'div',
        { class: 'overlay-row' },
        `${overlay.label}: score ${overlay.score.score.toFixed(4)} `,
        pin,
        discard,
      ),
    );
  }
  return panel;
}

function discussionPanel(view: SessionView): HTMLElement {
  const current = view.currentEvent;
  if (current === null) return el('div');
  const panel = el('section', { class: 'panel', id: 'panel-discussion' });

  const questions = el('details', { open: '' }, el('summary', {}, 'Current situation'));
  const list = el('ul', {});
  for (const question of current.guidingQuestions) list.appendChild(el('li', {}, question));
  questions.appendChild(list);
  panel.appendChild(questions);

  const courses = el('details', { open: '' }, el('summary', {}, 'Courses of action'));
  for (const course of current.courses) {
    const whatIf = el('button', { 'data-coa': course.id }, `What-if: ${course.title}`);
    if (!vm.whatIfEnabled()) whatIf.setAttribute('disabled', '');
    whatIf.addEventListener('click', () => guarded(() => vm.runWhatIf(course.id, 12.0)));
    const choose = el('button', {}, `Choose ${course.id}`);
    choose.addEventListener('click', () => guarded(() => vm.submitCourse(course.id)));
    courses.appendChild(
      el(
        'div',
        { class: 'course' },
        el('strong', {}, course.title),
        el('p', {}, course.rationale),
        el('p', { class: 'cost' }, course.costLabel),
        whatIf,
        choose,
      ),
    );
  }
  panel.appendChild(courses);

  const agreement = el('details', { open: '' }, el('summary', {}, 'Agreement'));
  agreement.appendChild(
    el('p', {}, current.chosenCourse ? `chosen: ${current.chosenCourse}` : 'no course chosen yet'),
  );
  panel.appendChild(agreement);
  return panel;
}

function surveyPanel(view: SessionView): HTMLElement {
  const panel = el('section', { class: 'panel', id: 'panel-survey' });
  panel.appendChild(el('h2', {}, `Closure: participant survey (${view.surveyCount} recorded)`));
  const validation = vm.surveyValidation();
  for (const column of SURVEY_COLUMNS) {
    const label = el('label', { for: `survey-${column}` }, `${column}: ${COLUMN_LABELS[column] ?? ''}`);
    let input: HTMLElement;
    if (column === 'X19') {
      input = el('textarea', { id: `survey-${column}` });
      input.addEventListener('input', (e) =>
        vm.setSurveyValue(column, (e.target as HTMLTextAreaElement).value),
      );
    } else if (BINARY_COLUMNS.includes(column)) {
      input = el('input', {
        id: `survey-${column}`, type: 'checkbox', 'data-kind': 'binary',
      });
      input.addEventListener('change', (e) =>
        vm.setSurveyValue(column, (e.target as HTMLInputElement).checked ? 1 : 0),
      );
    } else {
      input = el('input', {
        id: `survey-${column}`, type: 'number', min: '0', max: '5', step: '0.5',
      });
      input.addEventListener('input', (e) =>
        vm.setSurveyValue(column, (e.target as HTMLInputElement).value),
      );
    }
    const error = validation.errors[column as SurveyColumn];
    panel.appendChild(
      el('div', { class: error ? 'field invalid' : 'field' }, label, input,
        error ? el('span', { class: 'error' }, error) : ''),
    );
  }
  const submit = el('button', { id: 'survey-submit' }, 'Submit response');
  submit.addEventListener('click', () => guarded(() => vm.submitSurveyRow()));
  panel.appendChild(submit);
  return panel;
}

function render(): void {
  const view = vm.view;
  app!.replaceChildren();
  app!.appendChild(el('h1', {}, 'Exercise console'));
  app!.appendChild(sessionControls());
  if (statusLine) app!.appendChild(el('p', { class: 'status', role: 'alert' }, statusLine));
  if (view === null) return;

  app!.appendChild(advanceBar(view));
  const step = view.currentEvent?.step;
  if (view.phase === 'CLOSURE' || view.phase === 'ARCHIVED') {
    app!.appendChild(surveyPanel(view));
  } else if (step === 'PRESENTATION') {
    app!.appendChild(presentationPanel(view));
  } else if (step === 'MODEL_APPLICATION' || step === 'INTERPRETATION') {
    app!.appendChild(chartsPanel());
  } else if (step === 'DISCUSSION' || step === 'CONCLUSIONS') {
    app!.appendChild(chartsPanel());
    app!.appendChild(discussionPanel(view));
  }
  app!.appendChild(
    el('p', { class: 'stream-note' }, `live snapshots received: ${vm.streamLog.length}`),
  );
}

vm.onChange(render);
render();
