/**
 * DOM wiring for the explorer page. All logic with behavior worth testing
 * lives in the imported modules; this file only moves values between the
 * form and those modules.
 */

import { ApiError, DesignClient } from "./api.js";
import { escapeHtml } from "./format.js";
import {
  INDEX_LABELS,
  renderComparison,
  renderErrorBody,
  renderHistoryList,
  renderLocalErrors,
  renderResultsTable,
  renderSummary,
} from "./render.js";
import { ExplorerState } from "./state.js";
import type { FieldErrors, SchemaDoc } from "./validate.js";
import { isValid, validateRequest } from "./validate.js";
import type { DesignRequest } from "./types.js";
import { comboKey } from "./types.js";

const WEIGHT_PRESETS: Record<string, number[]> = {
  default: [1, 1, 1, 1, 1, 1, 1],
  consumer: [1, 1, 0.5, 0.3, 1, 1, 0.3],
};

const DEFAULT_TOLERANCE = 0.1;

function must<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) {
    throw new Error(`missing element #${id}`);
  }
  return el as T;
}

const form = must<HTMLFormElement>("design-form");
const submitButton = must<HTMLButtonElement>("submit");
const statusEl = must<HTMLElement>("status");
const errorsEl = must<HTMLElement>("errors");
const summaryEl = must<HTMLElement>("summary");
const resultsEl = must<HTMLElement>("results");
const comparisonEl = must<HTMLElement>("comparison");
const historyEl = must<HTMLElement>("history");
const weightsPanel = must<HTMLElement>("weights-panel");
const toleranceInput = must<HTMLInputElement>("tolerance");
const toleranceOut = must<HTMLElement>("tolerance-value");

const state = new ExplorerState();
const client = new DesignClient("");
let schema: SchemaDoc | null = null;

/** Authoritative weight values; sliders are just one way to set them. */
const weightValues: number[] = [...(WEIGHT_PRESETS["default"] as number[])];
const weightSliders: HTMLInputElement[] = [];
const weightOutputs: HTMLElement[] = [];

function buildWeightSliders(): void {
  for (let i = 0; i < 7; i++) {
    const label = INDEX_LABELS[i] ?? `X${i + 1}`;
    const descriptor = label.slice(label.indexOf(" ") + 1);
    const row = document.createElement("div");
    row.className = "weight-row";

    const name = document.createElement("label");
    name.textContent = `k${i + 1} ${descriptor}`;
    name.htmlFor = `weight-${i}`;

    const slider = document.createElement("input");
    slider.type = "range";
    slider.id = `weight-${i}`;
    slider.min = "-1";
    slider.max = "1";
    slider.step = "any";
    slider.value = "0";

    const out = document.createElement("output");
    out.textContent = "1";

    slider.addEventListener("input", () => {
      weightValues[i] = 10 ** Number(slider.value);
      out.textContent = (weightValues[i] as number).toPrecision(3);
    });

    row.append(name, slider, out);
    weightsPanel.append(row);
    weightSliders.push(slider);
    weightOutputs.push(out);
  }
}

function setWeights(values: number[]): void {
  for (let i = 0; i < 7; i++) {
    const value = values[i] ?? 1;
    weightValues[i] = value;
    const slider = weightSliders[i];
    const out = weightOutputs[i];
    if (slider) {
      slider.value = String(Math.log10(value));
    }
    if (out) {
      out.textContent = value.toPrecision(3);
    }
  }
}

function numberField(id: string): number | undefined {
  const input = must<HTMLInputElement>(id);
  if (input.disabled) {
    return undefined;
  }
  const text = input.value.trim();
  if (text === "") {
    return undefined;
  }
  return Number(text);
}

function densityMode(): string {
  const checked = form.querySelector<HTMLInputElement>(
    'input[name="density_mode"]:checked',
  );
  return checked?.value ?? "altitude";
}

function syncDensityInputs(): void {
  const mode = densityMode();
  must<HTMLInputElement>("altitude").disabled = mode !== "altitude";
  must<HTMLInputElement>("air_density").disabled = mode !== "density";
}

function buildRequest(): Record<string, unknown> {
  const body: Record<string, unknown> = {};
  const assign = (key: string, value: unknown): void => {
    if (value !== undefined) {
      body[key] = value;
    }
  };

  assign("hover_time", numberField("hover_time"));
  assign("payload", numberField("payload"));
  assign("thrust_ratio", numberField("thrust_ratio"));
  assign("rotor_count", numberField("rotor_count"));
  assign("battery_density", numberField("battery_density"));
  assign("top_n", numberField("top_n"));
  if (densityMode() === "altitude") {
    assign("altitude", numberField("altitude"));
  } else {
    assign("air_density", numberField("air_density"));
  }

  const mode = must<HTMLSelectElement>("screening_mode").value;
  if (mode !== "time") {
    body["screening_mode"] = mode;
  }

  if (weightValues.some((w) => w !== 1)) {
    body["weights"] = [...weightValues];
  }

  const tolerance = Number(toleranceInput.value);
  if (Math.abs(tolerance - DEFAULT_TOLERANCE) > 1e-12) {
    body["defaults"] = { screening_tolerance: tolerance };
  }

  return body;
}

function showFieldErrors(errors: FieldErrors): void {
  for (const slot of form.querySelectorAll<HTMLElement>("[data-error-for]")) {
    const field = slot.dataset["errorFor"] ?? "";
    slot.textContent = errors[field] ?? "";
  }
}

function pinnedKeySet(): Set<string> {
  return new Set(state.pinned().map((pin) => pin.key));
}

function rerender(): void {
  const entry = state.current;
  if (entry) {
    summaryEl.innerHTML = renderSummary(entry.response);
    resultsEl.innerHTML = renderResultsTable(entry.response, pinnedKeySet());
  } else {
    summaryEl.innerHTML = "";
    resultsEl.innerHTML = "";
  }
  comparisonEl.innerHTML = renderComparison(state.pinned());
  historyEl.innerHTML = renderHistoryList(state.history, entry?.id ?? null);
}

function isAbort(err: unknown): boolean {
  return (
    typeof err === "object" &&
    err !== null &&
    (err as { name?: string }).name === "AbortError"
  );
}

async function submit(): Promise<void> {
  if (!schema) {
    return;
  }
  const body = buildRequest();
  const errors = validateRequest(schema, body);
  showFieldErrors(errors);
  if (!isValid(errors)) {
    errorsEl.innerHTML = renderLocalErrors(errors);
    return;
  }
  errorsEl.innerHTML = "";
  statusEl.textContent = "Designing…";
  try {
    const request = body as unknown as DesignRequest;
    const response = await client.design(request);
    statusEl.textContent = "";
    state.recordResponse(request, response);
    rerender();
  } catch (err) {
    if (isAbort(err)) {
      return; // a newer submission superseded this one
    }
    statusEl.textContent = "";
    if (err instanceof ApiError) {
      errorsEl.innerHTML = renderErrorBody(err.status, {
        error: { code: err.code, message: err.message, details: err.details },
      });
    } else {
      errorsEl.innerHTML =
        `<div class="error-panel"><h3>Request failed</h3>` +
        `<p>${escapeHtml(String(err))}</p></div>`;
    }
  }
}

function populateForm(request: DesignRequest): void {
  const setValue = (id: string, value: unknown): void => {
    if (value !== undefined) {
      must<HTMLInputElement>(id).value = String(value);
    }
  };
  setValue("hover_time", request.hover_time);
  setValue("payload", request.payload);
  setValue("thrust_ratio", request.thrust_ratio);
  setValue("rotor_count", request.rotor_count);
  setValue("battery_density", request.battery_density);
  setValue("top_n", request.top_n);

  const useDensity = request.air_density !== undefined;
  for (const radio of form.querySelectorAll<HTMLInputElement>(
    'input[name="density_mode"]',
  )) {
    radio.checked = radio.value === (useDensity ? "density" : "altitude");
  }
  syncDensityInputs();
  if (useDensity) {
    setValue("air_density", request.air_density);
  } else {
    setValue("altitude", request.altitude ?? 0);
  }

  must<HTMLSelectElement>("screening_mode").value = request.screening_mode ?? "time";
  setWeights(request.weights ?? (WEIGHT_PRESETS["default"] as number[]));
  const tolerance = request.defaults?.screening_tolerance ?? DEFAULT_TOLERANCE;
  toleranceInput.value = String(tolerance);
  toleranceOut.textContent = tolerance.toFixed(2);
}

function wire(): void {
  buildWeightSliders();
  syncDensityInputs();

  for (const radio of form.querySelectorAll<HTMLInputElement>(
    'input[name="density_mode"]',
  )) {
    radio.addEventListener("change", syncDensityInputs);
  }

  for (const button of document.querySelectorAll<HTMLButtonElement>("[data-preset]")) {
    button.addEventListener("click", () => {
      const preset = WEIGHT_PRESETS[button.dataset["preset"] ?? ""];
      if (preset) {
        setWeights(preset);
      }
    });
  }

  toleranceInput.addEventListener("input", () => {
    toleranceOut.textContent = Number(toleranceInput.value).toFixed(2);
  });

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void submit();
  });

  resultsEl.addEventListener("click", (event) => {
    const button = (event.target as HTMLElement).closest<HTMLElement>(".pin-toggle");
    if (!button) {
      return;
    }
    const key = button.dataset["key"] ?? "";
    if (state.isPinned(key)) {
      state.unpin(key);
    } else {
      const candidate = state.current?.response.candidates.find(
        (c) => comboKey(c.combo) === key,
      );
      if (candidate) {
        state.pin(candidate);
      }
    }
    rerender();
  });

  comparisonEl.addEventListener("click", (event) => {
    if ((event.target as HTMLElement).closest(".unpin-all")) {
      state.unpinAll();
      rerender();
    }
  });

  historyEl.addEventListener("click", (event) => {
    const button = (event.target as HTMLElement).closest<HTMLElement>(
      ".history-select",
    );
    if (!button) {
      return;
    }
    const entry = state.selectEntry(Number(button.dataset["entryId"]));
    if (entry) {
      populateForm(entry.request);
      rerender();
    }
  });
}

async function boot(): Promise<void> {
  wire();
  submitButton.disabled = true;
  statusEl.textContent = "Loading schema…";
  try {
    const response = await fetch("./schema.json");
    if (!response.ok) {
      throw new Error(`HTTP ${response.status}`);
    }
    schema = (await response.json()) as SchemaDoc;
    submitButton.disabled = false;
    statusEl.textContent = "";
  } catch (err) {
    statusEl.textContent = `Could not load validation schema: ${String(err)}`;
  }
}

void boot();
