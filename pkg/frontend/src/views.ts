/** Pure HTML renderers, one per view fragment.
 *
 * Every number shown here is printed from the API response as-is; the
 * blend that produced l_ensemble happened server-side and is never
 * recomputed in the browser.
 */

import type {
  AlertPayload,
  ApiError,
  ClassifyResponse,
  SearchHit,
  SubmitResponse,
  TrendGroupView,
} from "./api.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Fixed-width display form; purely cosmetic, no arithmetic on scores. */
export function formatScore(value: number): string {
  return value.toFixed(3);
}

type ScoreKey = "l_ensemble" | "l_raw" | "l_conf" | "l_gpt";

const SCORE_ROWS: ReadonlyArray<[ScoreKey, string]> = [
  ["l_ensemble", "ensemble score"],
  ["l_raw", "bowl vote"],
  ["l_conf", "bowl confidence"],
  ["l_gpt", "model verdict"],
];

export function renderVerdictCard(result: ClassifyResponse): string {
  const verdict = result.is_phishing ? "Phishing" : "Not phishing";
  const tone = result.is_phishing ? "verdict-phishing" : "verdict-clean";
  const scores = SCORE_ROWS.map(
    ([key, label]) => `
      <tr>
        <td>${label}</td>
        <td class="score" data-score="${key}">${formatScore(result[key])}</td>
      </tr>`,
  ).join("");
  const neighbors = result.neighbors.length
    ? `<table class="neighbors">
        <thead><tr><th>stored email</th><th>label</th><th>distance</th><th>weight</th></tr></thead>
        <tbody>${result.neighbors
          .map(
            (neighbor) => `
          <tr>
            <td><a href="#email/${escapeHtml(neighbor.id)}">${escapeHtml(neighbor.id.slice(0, 12))}</a></td>
            <td>${neighbor.label}</td>
            <td>${formatScore(neighbor.distance)}</td>
            <td>${formatScore(neighbor.weight)}</td>
          </tr>`,
          )
          .join("")}</tbody>
      </table>`
    : `<p class="muted">The bowl holds nothing similar yet.</p>`;
  const nearest =
    result.d0 === null ? "no stored emails" : `nearest match d0 = ${formatScore(result.d0)}`;
  return `
  <div class="card verdict-card ${tone}">
    <h2>${verdict}</h2>
    <p class="muted">mode: ${result.mode} &middot; ${nearest}</p>
    <table class="scores"><tbody>${scores}</tbody></table>
    <p class="reason">${escapeHtml(result.verdict.reason)}</p>
    ${
      result.verdict.is_impersonating
        ? `<p class="impersonation">Possible impersonation of ${escapeHtml(result.verdict.is_impersonating)}</p>`
        : ""
    }
    <h3>Neighbor evidence</h3>
    ${neighbors}
    <h3>Anonymized text</h3>
    <pre class="email-text">${escapeHtml(result.anonymized_text)}</pre>
  </div>`;
}

/** Empty string when there is nothing to announce. */
export function renderAlertBanner(alerts: AlertPayload[]): string {
  const latest = alerts[0];
  if (latest === undefined) {
    return "";
  }
  return `
  <div class="alert-banner" role="alert">
    <strong>${alerts.length} campaign alert${alerts.length === 1 ? "" : "s"}</strong>
    &mdash; latest: ${escapeHtml(latest.group_id)} at score
    ${formatScore(latest.score_at_alert)} (${escapeHtml(latest.timestamp)})
  </div>`;
}

export function renderSearchResults(hits: SearchHit[]): string {
  if (hits.length === 0) {
    return `<p class="empty-state">No matches in the bowl.</p>`;
  }
  return `
  <ul class="search-results">${hits
    .map(
      (hit) => `
    <li class="card">
      <div class="result-meta">
        <span class="label label-${hit.label}">${hit.label === 1 ? "phishing" : "benign"}</span>
        <span class="muted">${escapeHtml(hit.source)} &middot; distance ${formatScore(hit.distance)}</span>
      </div>
      <pre class="email-text">${escapeHtml(hit.text)}</pre>
    </li>`,
    )
    .join("")}</ul>`;
}

export function renderTrendsTable(groups: TrendGroupView[]): string {
  if (groups.length === 0) {
    return `<p class="empty-state">No trend groups yet.</p>`;
  }
  return `
  <table class="trends">
    <thead>
      <tr><th>group</th><th>score</th><th>members</th><th>armed</th><th>last update</th></tr>
    </thead>
    <tbody>${groups
      .map(
        (group) => `
      <tr>
        <td>${escapeHtml(group.group_id)}</td>
        <td>${formatScore(group.score)}</td>
        <td>${group.member_count}</td>
        <td>${group.alert_armed ? "yes" : "no"}</td>
        <td>${escapeHtml(group.last_update)}</td>
      </tr>`,
      )
      .join("")}</tbody>
  </table>`;
}

export function renderSubmitConfirmation(response: SubmitResponse): string {
  return `
  <div class="card">
    <h2>Stored in the bowl</h2>
    <p class="muted">record ${escapeHtml(response.id)}</p>
    <pre class="email-text">${escapeHtml(response.anonymized_text)}</pre>
    ${
      response.alert
        ? `<p class="impersonation">This submission tripped a campaign alert
           (${escapeHtml(response.alert.group_id)}).</p>`
        : ""
    }
  </div>`;
}

/** Stage and message are shown verbatim so operators see what the server saw. */
export function renderError(error: ApiError): string {
  return `
  <div class="error-banner" role="alert">
    <strong>${escapeHtml(error.stage)}</strong>: ${escapeHtml(error.message)}
    <button type="button" class="retry">Retry</button>
  </div>`;
}
