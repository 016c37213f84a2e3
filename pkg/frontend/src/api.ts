/** Thin fetch wrapper over the analysis service.
 *
 * Every method resolves to the parsed server JSON or throws an
 * ApiError carrying the status and the server's error message, so the
 * views can show exactly what the backend said (including 413 size
 * limits and parse errors with line numbers).
 */

import type {
  DimdescResponse, EllipsesResponse, Eta2Response, FitRequest, FitResponse,
  FrequencyResponse, LabelledMatrix, RateResponse, UploadResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
    this.name = "ApiError";
  }
}

async function asJson<T>(res: Response): Promise<T> {
  let doc: unknown = null;
  try {
    doc = await res.json();
  } catch {
    /* non-JSON body; fall through to status-based error */
  }
  if (!res.ok) {
    const message =
      doc && typeof doc === "object" && "error" in doc
        ? String((doc as { error: unknown }).error)
        : `request failed with status ${res.status}`;
    throw new ApiError(res.status, message);
  }
  return doc as T;
}

export class ApiClient {
  constructor(readonly baseUrl: string = "") {}

  private get<T>(path: string): Promise<T> {
    return fetch(this.baseUrl + path).then((res) => asJson<T>(res));
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return fetch(this.baseUrl + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    }).then((res) => asJson<T>(res));
  }

  uploadDataset(csv: string, dictionary: string): Promise<UploadResponse> {
    return this.post("/api/datasets", { csv, dictionary });
  }

  fitModel(datasetId: string, request: FitRequest): Promise<FitResponse> {
    return this.post(`/api/datasets/${datasetId}/mca`, request);
  }

  coordinates(modelId: string, target: string, dims: number[]): Promise<LabelledMatrix> {
    return this.get(
      `/api/models/${modelId}/coordinates?target=${target}&dims=${dims.join(",")}`);
  }

  cos2(modelId: string, target: string, dims: number[]): Promise<LabelledMatrix> {
    return this.get(
      `/api/models/${modelId}/cos2?target=${target}&dims=${dims.join(",")}`);
  }

  contributions(modelId: string, target: string): Promise<LabelledMatrix> {
    return this.get(`/api/models/${modelId}/contributions?target=${target}`);
  }

  eta2(modelId: string): Promise<Eta2Response> {
    return this.get(`/api/models/${modelId}/eta2`);
  }

  dimdesc(modelId: string, axis: number): Promise<DimdescResponse> {
    return this.get(`/api/models/${modelId}/dimdesc?axis=${axis}`);
  }

  ellipses(modelId: string, group: string, axes: [number, number],
           level = 0.95, kind = "mean"): Promise<EllipsesResponse> {
    return this.get(
      `/api/models/${modelId}/ellipses?group=${encodeURIComponent(group)}` +
      `&axes=${axes.join(",")}&level=${level}&kind=${kind}`);
  }

  frequencies(datasetId: string, variable: string): Promise<FrequencyResponse> {
    return this.get(
      `/api/datasets/${datasetId}/frequencies?var=${encodeURIComponent(variable)}`);
  }

  rates(datasetId: string, variable: string, decimals = 2): Promise<RateResponse> {
    return this.get(
      `/api/datasets/${datasetId}/rates?var=${encodeURIComponent(variable)}` +
      `&decimals=${decimals}`);
  }
}

/** Tracks the newest request per channel so slow responses for
 * superseded requests can be recognized and dropped. */
export class RequestTokens {
  private latest = new Map<string, number>();
  private counter = 0;

  issue(channel: string): number {
    const token = ++this.counter;
    this.latest.set(channel, token);
    return token;
  }

  isCurrent(channel: string, token: number): boolean {
    return this.latest.get(channel) === token;
  }
}
