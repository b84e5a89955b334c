// Workbench wiring: schema-driven form on the left, live run view on the
// right. One in-flight poll per run view; launching again replaces the
// previous view.

import { ApiClient, ApiError } from "./api.js";
import type { Api } from "./api.js";
import type { ProblemEntry, RunRecordRow, RunSolution, RunStatus } from "./api.js";
import { renderChartSvg } from "./chart.js";
import { FormModel } from "./form.js";
import { LiveRun } from "./poller.js";
import { TourView, drawTour } from "./tour.js";
import { CONFIG_FIELDS, rangeHint } from "./validation.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (text !== undefined) node.textContent = text;
  return node;
}

export class App {
  readonly api: Api;
  form!: FormModel;
  live: LiveRun | null = null;
  tourView = new TourView();
  private root: HTMLElement;

  constructor(root: HTMLElement, api: Api = new ApiClient()) {
    this.root = root;
    this.api = api;
  }

  async boot(): Promise<void> {
    this.root.textContent = "loading catalog...";
    try {
      const [algorithms, problems] = await Promise.all([
        this.api.algorithms(),
        this.api.problems(),
      ]);
      this.form = new FormModel(algorithms, problems);
    } catch {
      this.root.textContent = "";
      const banner = el("div", { class: "banner error" },
        "could not reach the run service");
      const retry = el("button", { type: "button" }, "retry");
      retry.addEventListener("click", () => void this.boot());
      banner.appendChild(retry);
      this.root.appendChild(banner);
      return;
    }
    this.renderShell();
  }

  private renderShell(): void {
    this.root.textContent = "";
    const layout = el("div", { class: "layout" });
    layout.appendChild(this.renderFormPanel());
    layout.appendChild(this.renderRunPanel());
    this.root.appendChild(layout);
    this.refreshForm();
  }

  // ---------------------------------------------------------------- form

  private renderFormPanel(): HTMLElement {
    const panel = el("section", { class: "panel", id: "form-panel" });
    panel.appendChild(el("h2", {}, "configure"));

    const algoRow = el("div", { class: "row" });
    algoRow.appendChild(el("label", { for: "algorithm" }, "algorithm"));
    const algoSelect = el("select", { id: "algorithm" });
    for (const algo of this.form.algorithms) {
      algoSelect.appendChild(
        el("option", { value: algo.id }, `${algo.id} (${algo.kind})`));
    }
    algoSelect.addEventListener("change", () => {
      this.form.selectAlgorithm(algoSelect.value);
      this.refreshForm();
    });
    algoRow.appendChild(algoSelect);
    panel.appendChild(algoRow);

    const problemRow = el("div", { class: "row" });
    problemRow.appendChild(el("label", { for: "problem" }, "problem"));
    const problemSelect = el("select", { id: "problem" });
    problemSelect.appendChild(el("option", { value: "" }, "choose..."));
    for (const problem of this.form.problems) {
      problemSelect.appendChild(el("option", { value: problem.id },
        `${problem.id} (${problem.kind})`));
    }
    problemSelect.addEventListener("change", () => {
      this.form.selectProblem(problemSelect.value || null);
      this.refreshForm();
    });
    problemRow.appendChild(problemSelect);
    panel.appendChild(problemRow);

    const upload = el("div", { class: "row" });
    upload.appendChild(el("label", { for: "upload" }, "upload problem"));
    const file = el("input", { id: "upload", type: "file", accept: ".xml" });
    file.addEventListener("change", () => void this.handleUpload(file));
    upload.appendChild(file);
    panel.appendChild(upload);

    panel.appendChild(el("div", { id: "dimension-row" }));
    panel.appendChild(el("div", { id: "param-fields" }));
    panel.appendChild(el("h3", {}, "run"));
    panel.appendChild(el("div", { id: "config-fields" }));
    panel.appendChild(el("div", { id: "form-errors", class: "errors" }));

    const submit = el("button", { id: "launch", type: "button" }, "launch");
    submit.addEventListener("click", () => void this.launch());
    panel.appendChild(submit);
    return panel;
  }

  private refreshForm(): void {
    const algoSelect = this.root.querySelector<HTMLSelectElement>("#algorithm");
    if (algoSelect) algoSelect.value = this.form.algorithmId;

    const dimRow = this.root.querySelector<HTMLElement>("#dimension-row");
    if (dimRow) {
      dimRow.textContent = "";
      const problem = this.form.problem;
      if (problem && problem.builtin && problem.kind === "continuous") {
        const row = el("div", { class: "row" });
        row.appendChild(el("label", { for: "dimension" }, "dimension"));
        const input = el("input", {
          id: "dimension",
          value: this.form.dimension ||
            String(problem.default_dimension ?? 10),
        });
        input.addEventListener("input", () => {
          this.form.dimension = input.value;
        });
        row.appendChild(input);
        dimRow.appendChild(row);
      }
    }

    const paramBox = this.root.querySelector<HTMLElement>("#param-fields");
    if (paramBox) {
      paramBox.textContent = "";
      for (const field of this.form.algorithm.params) {
        const state = this.form.params.get(field.name);
        const row = el("div", { class: "row param" });
        row.appendChild(el("label", { for: `param-${field.name}` },
          field.name));
        const input = el("input", {
          id: `param-${field.name}`,
          value: state ? state.value : "",
          title: field.description,
          placeholder: field.default === null ? "auto" : "",
        });
        input.addEventListener("input", () => {
          this.form.setParam(field.name, input.value);
          this.refreshValidation();
        });
        row.appendChild(input);
        row.appendChild(el("span", { class: "hint" }, rangeHint(field)));
        row.appendChild(el("span", {
          class: "field-error",
          id: `error-${field.name}`,
        }));
        paramBox.appendChild(row);
      }
    }

    const configBox = this.root.querySelector<HTMLElement>("#config-fields");
    if (configBox && configBox.childElementCount === 0) {
      for (const spec of CONFIG_FIELDS) {
        const state = this.form.config.get(spec.name);
        const row = el("div", { class: "row" });
        row.appendChild(el("label", { for: `cfg-${spec.name}` }, spec.name));
        const input = el("input", {
          id: `cfg-${spec.name}`,
          value: state ? state.value : "",
          placeholder: spec.required ? "" : "optional",
        });
        input.addEventListener("input", () => {
          this.form.setConfig(spec.name, input.value);
          this.refreshValidation();
        });
        row.appendChild(input);
        row.appendChild(el("span", {
          class: "field-error",
          id: `error-cfg-${spec.name}`,
        }));
        configBox.appendChild(row);
      }
    }
    this.refreshValidation();
  }

  private refreshValidation(): void {
    for (const field of this.form.algorithm.params) {
      const state = this.form.params.get(field.name);
      const slot = this.root.querySelector(`#error-${field.name}`);
      if (slot) slot.textContent = state?.error ?? "";
    }
    for (const spec of CONFIG_FIELDS) {
      const state = this.form.config.get(spec.name);
      const slot = this.root.querySelector(`#error-cfg-${spec.name}`);
      if (slot) slot.textContent = state?.error ?? "";
    }
    const summary = this.root.querySelector<HTMLElement>("#form-errors");
    if (summary) {
      const mismatch = this.form.kindMismatch();
      summary.textContent = mismatch ?? "";
    }
    const button = this.root.querySelector<HTMLButtonElement>("#launch");
    if (button) button.disabled = !this.form.canSubmit();
  }

  private async handleUpload(input: HTMLInputElement): Promise<void> {
    const file = input.files?.[0];
    if (!file) return;
    const summary = this.root.querySelector<HTMLElement>("#form-errors");
    try {
      const problemId = await this.api.uploadProblem(await file.text());
      this.form.problems = await this.api.problems();
      const select = this.root.querySelector<HTMLSelectElement>("#problem");
      if (select) {
        select.textContent = "";
        select.appendChild(el("option", { value: "" }, "choose..."));
        for (const problem of this.form.problems) {
          select.appendChild(el("option", { value: problem.id },
            `${problem.id} (${problem.kind})`));
        }
        select.value = problemId;
      }
      this.form.selectProblem(problemId);
      this.refreshForm();
    } catch (err) {
      if (summary) {
        summary.textContent = err instanceof ApiError
          ? `upload rejected: ${err.message}`
          : "upload failed";
      }
    }
  }

  // ----------------------------------------------------------- run panel

  private renderRunPanel(): HTMLElement {
    const panel = el("section", { class: "panel", id: "run-panel" });
    panel.appendChild(el("h2", {}, "run view"));
    const status = el("div", { id: "status-badge", class: "badge" }, "idle");
    panel.appendChild(status);
    const cancel = el("button", {
      id: "cancel",
      type: "button",
      disabled: "disabled",
    }, "cancel");
    cancel.addEventListener("click", () => void this.live?.cancel());
    panel.appendChild(cancel);
    panel.appendChild(el("div", { id: "chart" }));
    const tourPanel = el("div", { id: "tour-panel", hidden: "hidden" });
    tourPanel.appendChild(el("h3", {}, "best tour"));
    tourPanel.appendChild(el("canvas", {
      id: "tour-canvas",
      width: "360",
      height: "360",
    }));
    panel.appendChild(tourPanel);
    panel.appendChild(el("div", { id: "solution" }));
    return panel;
  }

  private setBadge(text: string): void {
    const badge = this.root.querySelector<HTMLElement>("#status-badge");
    if (badge) {
      badge.textContent = text;
      badge.className = `badge badge-${text}`;
    }
  }

  async launch(): Promise<void> {
    if (!this.form.canSubmit()) return;
    const summary = this.root.querySelector<HTMLElement>("#form-errors");
    let runId: string;
    try {
      runId = await this.api.launch(this.form.toRequest());
    } catch (err) {
      if (summary) {
        if (err instanceof ApiError && err.field) {
          summary.textContent = `${err.field}: ${err.message}`;
        } else {
          summary.textContent = err instanceof Error
            ? err.message : "launch failed";
        }
      }
      return;
    }
    if (summary) summary.textContent = "";
    this.startFollowing(runId);
  }

  startFollowing(runId: string): void {
    this.live?.stop();
    this.tourView = new TourView();
    const chart = this.root.querySelector<HTMLElement>("#chart");
    if (chart) chart.textContent = "";
    const solution = this.root.querySelector<HTMLElement>("#solution");
    if (solution) solution.textContent = "";
    const cancel = this.root.querySelector<HTMLButtonElement>("#cancel");
    if (cancel) cancel.disabled = false;

    const problem = this.form.problem;
    const cities = problem && problem.kind === "tour"
      ? problem.cities ?? null : null;
    const tourPanel = this.root.querySelector<HTMLElement>("#tour-panel");
    if (tourPanel) tourPanel.hidden = cities === null;

    this.setBadge("pending");
    this.live = new LiveRun(this.api, runId, {
      onRecords: (_rows, all) => this.repaint(all, cities),
      onStatus: (state) => this.setBadge(state),
      onFinished: (sol, status) => this.finish(sol, status),
    });
    this.live.start();
  }

  private repaint(
    records: RunRecordRow[],
    cities: [number, number][] | null,
  ): void {
    const chart = this.root.querySelector<HTMLElement>("#chart");
    if (chart) chart.innerHTML = renderChartSvg(records);
    if (cities) {
      const last = records[records.length - 1];
      if (this.tourView.update(last.best, last.candidate)) {
        const canvas =
          this.root.querySelector<HTMLCanvasElement>("#tour-canvas");
        if (canvas && this.tourView.tour) {
          drawTour(canvas, cities, this.tourView.tour);
        }
      }
    }
  }

  private finish(solution: RunSolution | null, status: RunStatus): void {
    const cancel = this.root.querySelector<HTMLButtonElement>("#cancel");
    if (cancel) cancel.disabled = true;
    const box = this.root.querySelector<HTMLElement>("#solution");
    if (box) {
      box.textContent = solution
        ? `final best ${solution.value} first attained at iteration ` +
          `${solution.first_attained} (${status})`
        : `run ${status}`;
    }
  }
}

export function mount(): void {
  const root = document.getElementById("app");
  if (root) void new App(root).boot();
}

declare global {
  interface Window {
    __SWARMBENCH_NO_AUTOMOUNT__?: boolean;
  }
}

if (typeof window !== "undefined" && !window.__SWARMBENCH_NO_AUTOMOUNT__) {
  if (document.readyState === "loading") {
    document.addEventListener("DOMContentLoaded", mount);
  } else {
    mount();
  }
}
