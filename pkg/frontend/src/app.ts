/** Wires the four views to the DOM and polls trends/alerts.
 *
 * All state lives on the server; a refresh rebuilds everything from the
 * API. Concurrent requests are allowed and the last response to land
 * wins its view.
 */

import { ApiError, PhishbowlApi } from "./api.js";
import {
  renderAlertBanner,
  renderError,
  renderSearchResults,
  renderSubmitConfirmation,
  renderTrendsTable,
  renderVerdictCard,
} from "./views.js";

declare global {
  interface Window {
    PHISHBOWL_API_URL?: string;
  }
}

const POLL_INTERVAL_MS = 15_000;

// Same-origin by default; set window.PHISHBOWL_API_URL before this module
// loads to point at a service elsewhere (the API allows cross-origin use).
const api = new PhishbowlApi(window.PHISHBOWL_API_URL ?? "");

function element<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (found === null) {
    throw new Error(`missing element #${id}`);
  }
  return found as T;
}

function asApiError(error: unknown): ApiError {
  if (error instanceof ApiError) {
    return error;
  }
  return new ApiError("network", String(error), 0);
}

function showError(target: HTMLElement, error: unknown, retry: () => void): void {
  target.innerHTML = renderError(asApiError(error));
  target.querySelector("button.retry")?.addEventListener("click", retry);
}

function emailFromForm(form: HTMLFormElement): { body: string; sender?: string; subject?: string } {
  const data = new FormData(form);
  const body = String(data.get("body") ?? "");
  const sender = String(data.get("sender") ?? "").trim();
  const subject = String(data.get("subject") ?? "").trim();
  return {
    body,
    ...(sender ? { sender } : {}),
    ...(subject ? { subject } : {}),
  };
}

function wireClassify(): void {
  const form = element<HTMLFormElement>("classify-form");
  const output = element<HTMLDivElement>("classify-output");
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const run = () => {
      output.innerHTML = `<p class="muted">scoring&hellip;</p>`;
      const data = new FormData(form);
      const table = String(data.get("ocr_table") ?? "").trim();
      const request = table ? { ocr_table: table } : emailFromForm(form);
      api
        .classify(request)
        .then((result) => {
          output.innerHTML = renderVerdictCard(result);
        })
        .catch((error) => showError(output, error, run));
    };
    run();
  });
}

function wireSubmit(): void {
  const form = element<HTMLFormElement>("submit-form");
  const output = element<HTMLDivElement>("submit-output");
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const run = () => {
      api
        .submit(emailFromForm(form))
        .then((response) => {
          output.innerHTML = renderSubmitConfirmation(response);
          form.reset();
        })
        .catch((error) => showError(output, error, run));
    };
    run();
  });
}

function wireSearch(): void {
  const form = element<HTMLFormElement>("search-form");
  const output = element<HTMLDivElement>("search-output");
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const run = () => {
      const query = String(new FormData(form).get("q") ?? "");
      api
        .search(query)
        .then((response) => {
          output.innerHTML = renderSearchResults(response.results);
        })
        .catch((error) => showError(output, error, run));
    };
    run();
  });
  output.innerHTML = renderSearchResults([]);
}

function refreshMonitoring(): void {
  const banner = element<HTMLDivElement>("alert-banner");
  const table = element<HTMLDivElement>("trends-output");
  api
    .alerts()
    .then((response) => {
      banner.innerHTML = renderAlertBanner(response.alerts);
    })
    .catch((error) => showError(banner, error, refreshMonitoring));
  api
    .trends()
    .then((response) => {
      table.innerHTML = renderTrendsTable(response.groups);
    })
    .catch((error) => showError(table, error, refreshMonitoring));
}

function wireTabs(): void {
  const tabs = Array.from(document.querySelectorAll<HTMLButtonElement>("nav button[data-view]"));
  const views = Array.from(document.querySelectorAll<HTMLElement>("main section[data-view]"));
  for (const tab of tabs) {
    tab.addEventListener("click", () => {
      for (const other of tabs) {
        other.classList.toggle("active", other === tab);
      }
      for (const view of views) {
        view.hidden = view.dataset.view !== tab.dataset.view;
      }
    });
  }
}

export function start(): void {
  wireTabs();
  wireClassify();
  wireSubmit();
  wireSearch();
  refreshMonitoring();
  window.setInterval(refreshMonitoring, POLL_INTERVAL_MS);
}

start();
