/** Typed client for the six phishbowl service endpoints.
 *
 * All scores arrive precomputed; this module only moves JSON. Pipeline
 * failures keep their server-side stage name so the UI can say which
 * step rejected a request.
 */

export interface NeighborEvidence {
  id: string;
  distance: number;
  label: number;
  weight: number;
}

export interface VerdictDetail {
  is_phishing: boolean;
  confidence: number;
  is_impersonating: string | null;
  reason: string;
}

export interface AlertPayload {
  group_id: string;
  representative_record_id: string | null;
  score_at_alert: number;
  timestamp: string;
}

export interface ClassifyResponse {
  is_phishing: boolean;
  l_ensemble: number;
  l_raw: number;
  l_conf: number;
  l_gpt: number;
  mode: "ensemble" | "gpt_only";
  anonymized_text: string;
  d0: number | null;
  neighbors: NeighborEvidence[];
  verdict: VerdictDetail;
  alert: AlertPayload | null;
}

export interface SubmitResponse {
  id: string;
  anonymized_text: string;
  alert: AlertPayload | null;
}

export interface SearchHit {
  id: string;
  text: string;
  label: number;
  source: string;
  created_at: string;
  distance: number;
}

export interface TrendGroupView {
  group_id: string;
  score: number;
  member_count: number;
  last_update: string;
  alert_armed: boolean;
  representative_record_id: string | null;
}

export interface EmailRecordView {
  id: string;
  text: string;
  label: number;
  source: string;
  created_at: string;
}

export interface EmailFields {
  body: string;
  sender?: string;
  subject?: string;
}

export type ClassifyRequest = EmailFields | { ocr_table: string };

/** Server errors are {stage, message}; network failures use stage "network". */
export class ApiError extends Error {
  constructor(
    readonly stage: string,
    message: string,
    readonly status: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class PhishbowlApi {
  constructor(private readonly baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await fetch(this.baseUrl + path, init);
    } catch (error) {
      throw new ApiError("network", `service unreachable: ${String(error)}`, 0);
    }
    const payload: unknown = await response.json().catch(() => null);
    if (!response.ok) {
      if (
        payload !== null &&
        typeof payload === "object" &&
        typeof (payload as Record<string, unknown>).stage === "string" &&
        typeof (payload as Record<string, unknown>).message === "string"
      ) {
        const known = payload as { stage: string; message: string };
        throw new ApiError(known.stage, known.message, response.status);
      }
      throw new ApiError("network", `unexpected ${response.status} response`, response.status);
    }
    return payload as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  classify(email: ClassifyRequest): Promise<ClassifyResponse> {
    return this.post("/api/classify", email);
  }

  submit(email: EmailFields): Promise<SubmitResponse> {
    return this.post("/api/submit", email);
  }

  search(query: string, n = 10): Promise<{ results: SearchHit[] }> {
    return this.request(`/api/search?q=${encodeURIComponent(query)}&n=${n}`);
  }

  trends(): Promise<{ groups: TrendGroupView[] }> {
    return this.request("/api/trends");
  }

  alerts(): Promise<{ alerts: AlertPayload[] }> {
    return this.request("/api/alerts");
  }

  email(recordId: string): Promise<EmailRecordView> {
    return this.request(`/api/emails/${encodeURIComponent(recordId)}`);
  }
}
