/** Response shapes of the analysis service, mirrored verbatim.
 *
 * The client never computes analysis numbers itself; everything shown
 * on screen comes out of one of these documents.
 */

export interface ValidationIssue {
  row: number;
  column: string;
  message: string;
}

export interface DatasetSummary {
  n: number;
  n_variables?: number;
  n_categories?: number;
  variables?: { name: string; labels: string[] }[];
  columns?: string[];
}

export interface UploadResponse {
  dataset_id: string;
  summary: DatasetSummary;
  validation: { n_rows: number; issues: ValidationIssue[] };
}

export interface EigenRow {
  dim: number;
  eigenvalue: number;
  percent: number;
  cumulative: number;
}

export interface FitResponse {
  model_id: string;
  eigen_table: EigenRow[];
}

export interface LabelledMatrix {
  labels: string[];
  values: number[][];
}

export interface Eta2Response {
  variables: string[];
  values: number[][];
}

export interface DimdescResponse {
  axis: number;
  variables: { name: string; eta2: number; p_value: number }[];
  categories: { label: string; estimate: number; p_value: number }[];
}

export interface EllipseDoc {
  label: string;
  center: [number, number];
  semi_major: number;
  semi_minor: number;
  angle: number;
  level: number;
  kind: string;
  member_count: number;
  degenerate: boolean;
}

export interface EllipsesResponse {
  ellipses: EllipseDoc[];
  warnings: string[];
}

export interface FrequencyResponse {
  variable: string;
  n: number;
  rows: { label: string; count: number; proportion: number }[];
}

export interface RateResponse {
  variable: string;
  n: number;
  rows: { label: string; count: number; percentage: number }[];
}

export interface FilterClause {
  variable: string;
  keep: string[];
}

export interface FitRequest {
  active: string[];
  filters?: FilterClause[];
  age_breaks?: number[];
  missing?: string;
  n_dims?: number;
  correction?: string;
}
