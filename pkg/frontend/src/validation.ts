// Client-side survey validation mirroring the server's ranges. The server
// remains the validation authority; this gate only stops bad input before it
// leaves the form.

export interface ValidationResult {
  isValid: boolean;
  error: string | null;
}

export const SURVEY_COLUMNS = [
  'Y',
  ...Array.from({ length: 19 }, (_, i) => `X${i + 1}`),
] as const;

export type SurveyColumn = (typeof SURVEY_COLUMNS)[number];

export const BINARY_COLUMNS: SurveyColumn[] = ['X1', 'X2', 'X3', 'X4'];

export const COLUMN_LABELS: Record<string, string> = {
  Y: 'Overall satisfaction with the exercise',
  X1: 'Prior participation in a tabletop or crisis simulation exercise',
  X2: 'Prior participation in a cybersecurity/cyberdefense simulation',
  X3: 'Prior participation in a maritime cybersecurity simulation',
  X4: 'Formal or informal cybersecurity training received',
  X5: 'Clarity of facilitator instructions and assistance',
  X6: 'Time management during the exercise',
  X7: 'Adequacy of the materials provided',
  X8: 'Relevance of the exercise to maritime security awareness',
  X9: 'Usefulness of the scenario information per event',
  X10: 'Overall understanding of the presented scenario',
  X11: 'Perceived complexity of the scenario',
  X12: 'Level of detail of the simulated scenario',
  X13: 'Applicability of acquired skills to your responsibilities',
  X14: 'Relevance of the simulation outputs for understanding each event',
  X15: 'Precision of the simulation information and graphics',
  X16: 'Importance of simulation models for crisis decision-making',
  X17: 'Difficulty of integrating such models into your organization',
  X18: 'Accuracy of the model outputs for the exercise objective',
  X19: 'Comments or observations',
};

export function validateCell(column: SurveyColumn, raw: string | number): ValidationResult {
  if (column === 'X19') {
    return { isValid: true, error: null };
  }
  const value = typeof raw === 'number' ? raw : Number(raw.trim());
  if (raw === '' || Number.isNaN(value)) {
    return { isValid: false, error: `${column} must be numeric` };
  }
  if (BINARY_COLUMNS.includes(column)) {
    if (value !== 0 && value !== 1) {
      return { isValid: false, error: `${column} must be 0 or 1` };
    }
    return { isValid: true, error: null };
  }
  if (value < 0 || value > 5) {
    return { isValid: false, error: `${column} must be in [0,5]` };
  }
  return { isValid: true, error: null };
}

export interface RowValidation {
  isValid: boolean;
  errors: Partial<Record<SurveyColumn, string>>;
}

export function validateRow(values: Partial<Record<SurveyColumn, string | number>>): RowValidation {
  const errors: Partial<Record<SurveyColumn, string>> = {};
  for (const column of SURVEY_COLUMNS) {
    if (column === 'X19') continue;
    const raw = values[column];
    const result = validateCell(column, raw === undefined ? '' : raw);
    if (!result.isValid && result.error) {
      errors[column] = result.error;
    }
  }
  return { isValid: Object.keys(errors).length === 0, errors };
}

/** Assemble the wire row [Y, X1..X19] once validation has passed. */
export function toWireRow(values: Partial<Record<SurveyColumn, string | number>>): (number | string)[] {
  return SURVEY_COLUMNS.map((column) => {
    const raw = values[column];
    if (column === 'X19') {
      return raw === undefined ? '' : String(raw);
    }
    return typeof raw === 'number' ? raw : Number(String(raw).trim());
  });
}
