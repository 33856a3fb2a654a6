/** Canned API payloads and a tiny fixture HTTP server for the tests.
 *
 * The classify fixture's l_ensemble is deliberately NOT what the server
 * formula would produce from its l_raw/l_conf/l_gpt (those inputs would
 * blend to 1.0). A UI that recomputes the blend instead of displaying
 * the API value will fail the score-breakdown assertions.
 */

import { createServer, type Server } from "node:http";
import type { AddressInfo } from "node:net";

import type {
  AlertPayload,
  ClassifyResponse,
  SearchHit,
  SubmitResponse,
  TrendGroupView,
} from "../src/api.js";

export const CLASSIFY_FIXTURE: ClassifyResponse = {
  is_phishing: true,
  l_ensemble: 0.123,
  l_raw: 1.0,
  l_conf: 1.0,
  l_gpt: 1.0,
  mode: "ensemble",
  anonymized_text:
    "This is a email:\nFrom: [Person 1]\nUrgent: verify your password now",
  d0: 0.25,
  neighbors: [
    { id: "abc123def456abc123def456abc123de", distance: 0.25, label: 1, weight: 0.91 },
    { id: "fed654cba321fed654cba321fed654cb", distance: 1.75, label: 0, weight: 0.09 },
  ],
  verdict: {
    is_phishing: true,
    confidence: 9,
    is_impersonating: "Paypal",
    reason: "suspicious phrases: urgent, verify",
  },
  alert: null,
};

export const ALERTS_FIXTURE: AlertPayload[] = [
  {
    group_id: "group-2",
    representative_record_id: "abc123def456abc123def456abc123de",
    score_at_alert: 36.5,
    timestamp: "2026-03-04T12:00:00+00:00",
  },
  {
    group_id: "group-1",
    representative_record_id: null,
    score_at_alert: 100.0,
    timestamp: "2026-03-01T12:00:00+00:00",
  },
];

export const TRENDS_FIXTURE: TrendGroupView[] = [
  {
    group_id: "group-2",
    score: 36.5,
    member_count: 40,
    last_update: "2026-03-04T12:00:00+00:00",
    alert_armed: false,
    representative_record_id: "abc123def456abc123def456abc123de",
  },
  {
    group_id: "group-1",
    score: 2.25,
    member_count: 310,
    last_update: "2026-03-04T12:00:00+00:00",
    alert_armed: true,
    representative_record_id: null,
  },
];

export const SUBMIT_FIXTURE: SubmitResponse = {
  id: "abc123def456abc123def456abc123de",
  anonymized_text: "This is a phishing email:\nUrgent: verify your password now",
  alert: ALERTS_FIXTURE[0] ?? null,
};

export const SEARCH_HIT_FIXTURE: SearchHit = {
  id: "abc123def456abc123def456abc123de",
  text: "This is a phishing email:\nwire transfer immediately",
  label: 1,
  source: "submitted",
  created_at: "2026-03-01T12:00:00+00:00",
  distance: 0.5,
};

function readBody(request: import("node:http").IncomingMessage): Promise<string> {
  return new Promise((resolve) => {
    let data = "";
    request.on("data", (chunk: Buffer) => {
      data += chunk.toString();
    });
    request.on("end", () => resolve(data));
  });
}

/** Routes mirror the real service, including its {stage, message} errors. */
export async function startFixtureServer(): Promise<{ server: Server; baseUrl: string }> {
  const server = createServer((request, response) => {
    const url = new URL(request.url ?? "/", "http://localhost");
    const send = (status: number, payload: unknown) => {
      response.writeHead(status, { "content-type": "application/json" });
      response.end(JSON.stringify(payload));
    };
    void (async () => {
      if (request.method === "POST" && url.pathname === "/api/classify") {
        const body = JSON.parse(await readBody(request)) as Record<string, unknown>;
        if (typeof body.body !== "string" && typeof body.ocr_table !== "string") {
          send(400, { stage: "request", message: "provide email fields (body) or ocr_table" });
        } else if (body.body === "break the anonymizer") {
          send(422, { stage: "anonymize", message: "anonymization failed after 2 attempts" });
        } else {
          send(200, CLASSIFY_FIXTURE);
        }
      } else if (request.method === "POST" && url.pathname === "/api/submit") {
        send(200, SUBMIT_FIXTURE);
      } else if (url.pathname === "/api/search") {
        const query = url.searchParams.get("q") ?? "";
        send(200, { results: query === "wire transfer" ? [SEARCH_HIT_FIXTURE] : [] });
      } else if (url.pathname === "/api/trends") {
        send(200, { groups: TRENDS_FIXTURE });
      } else if (url.pathname === "/api/alerts") {
        send(200, { alerts: ALERTS_FIXTURE });
      } else if (url.pathname.startsWith("/api/emails/")) {
        const recordId = decodeURIComponent(url.pathname.slice("/api/emails/".length));
        if (recordId === SEARCH_HIT_FIXTURE.id) {
          send(200, {
            id: recordId,
            text: SEARCH_HIT_FIXTURE.text,
            label: 1,
            source: "submitted",
            created_at: SEARCH_HIT_FIXTURE.created_at,
          });
        } else {
          send(404, { stage: "lookup", message: `no email with id '${recordId}'` });
        }
      } else if (url.pathname === "/broken") {
        response.writeHead(500, { "content-type": "text/plain" });
        response.end("not json");
      } else {
        send(404, { stage: "lookup", message: "unknown route" });
      }
    })();
  });
  await new Promise<void>((resolve) => server.listen(0, "127.0.0.1", resolve));
  const { port } = server.address() as AddressInfo;
  return { server, baseUrl: `http://127.0.0.1:${port}` };
}
