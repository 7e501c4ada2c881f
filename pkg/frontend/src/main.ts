/** Page wiring: one feed connection, periodic snapshots, render loop. */

import { ApiValidationError, GuidanceApi } from "./api.js";
import { EventFeed } from "./feed.js";
import { parseLossGoal, parseTargetForm } from "./forms.js";
import { DashboardModel } from "./model.js";
import { drawPlot, layerColor } from "./plot.js";

const api = new GuidanceApi("");
const feed = new EventFeed();
const model = new DashboardModel();

const $ = (id: string) => document.getElementById(id)!;

function renderStatus(): void {
  const [oddVersion, seq] = model.snapshotPair();
  $("tick").textContent = String(model.tick);
  $("config").textContent = model.currentConfig ?? "-";
  $("odd-version").textContent = `v${oddVersion}`;
  $("seq").textContent = `#${seq}`;
  const safe = $("safe-state");
  safe.textContent = model.safeState ? "SAFE STATE" : "in ODD";
  safe.className = model.safeState ? "badge danger" : "badge ok";
  $("paused").textContent = model.paused ? "paused" : "running";
  $("stale").style.display = model.oddStale() ? "inline" : "none";
}

function renderLegend(): void {
  const legend = $("legend");
  legend.innerHTML = "";
  model.layers().forEach((config, index) => {
    const item = document.createElement("span");
    item.className = "legend-item";
    item.innerHTML = `<span class="swatch" style="background:${layerColor(index)}"></span>` +
      `${config.id} [${config.lifetime_years[0]}-${config.lifetime_years[1]}y]`;
    legend.appendChild(item);
  });
}

function renderFeed(): void {
  const list = $("feed");
  list.innerHTML = "";
  for (const line of [...model.feed].reverse().slice(0, 200)) {
    const row = document.createElement("div");
    row.className = `feed-row kind-${line.kind}`;
    row.textContent = `#${line.seq} t${line.tick} [${line.kind}] ${line.summary}`;
    list.appendChild(row);
  }
}

function renderApproval(): void {
  const panel = $("approval");
  if (model.pendingApproval) {
    const pending = model.pendingApproval;
    panel.style.display = "block";
    $("approval-text").textContent =
      `${pending.element_id}@${pending.version} passed sandbox ` +
      `(pass fraction ${pending.pass_fraction}) for target ` +
      JSON.stringify(pending.target_regions);
  } else {
    panel.style.display = "none";
  }
}

function renderPlot(): void {
  const canvas = $("plot") as HTMLCanvasElement;
  const ctx = canvas.getContext("2d");
  if (ctx) {
    drawPlot(ctx, model, canvas.width, canvas.height);
  }
}

function renderAll(): void {
  renderStatus();
  renderLegend();
  renderFeed();
  renderApproval();
  renderPlot();
}

async function refreshOdd(): Promise<void> {
  model.applyOdd(await api.getOdd());
}

async function refreshState(): Promise<void> {
  model.applyState(await api.getState());
  if (model.oddStale()) {
    await refreshOdd();
  }
}

function showFormErrors(errors: { field: string; message: string }[]): void {
  $("target-errors").textContent = errors
    .map((e) => `${e.field}: ${e.message}`)
    .join("; ");
}

function wireForms(): void {
  $("target-submit").addEventListener("click", async () => {
    const parsed = parseTargetForm({
      utilityLo: ($("u-lo") as HTMLInputElement).value,
      utilityHi: ($("u-hi") as HTMLInputElement).value,
      contextLo: ($("c-lo") as HTMLInputElement).value,
      contextHi: ($("c-hi") as HTMLInputElement).value,
    });
    if (!parsed.ok) {
      showFormErrors(parsed.errors);
      return;
    }
    showFormErrors([]);
    try {
      await api.submitEvolutionTarget(parsed.utility, parsed.context);
    } catch (error) {
      if (error instanceof ApiValidationError) {
        showFormErrors(error.fields.map(([field, message]) => ({ field, message })));
      } else {
        showFormErrors([{ field: "server", message: String(error) }]);
      }
    }
  });

  $("approve").addEventListener("click", () => void api.approve());
  $("reject").addEventListener("click", () => void api.feedback("reject"));
  $("pause").addEventListener("click", async () => {
    model.paused = model.paused ? (await api.resume()).paused : (await api.pause()).paused;
    renderStatus();
  });
  $("goal-submit").addEventListener("click", () => {
    const goal = parseLossGoal(($("goal") as HTMLInputElement).value);
    if (goal === null) {
      $("target-errors").textContent = "loss goal must be a fraction in (0, 1)";
      return;
    }
    void api.setLossGoal(goal);
  });
}

async function start(): Promise<void> {
  wireForms();
  await refreshOdd();
  await refreshState();
  feed.onEvent((event) => {
    model.applyEvent(event);
    if (model.oddStale()) {
      void refreshOdd();
    }
  });
  await feed.backfill(api);
  void feed.run(api);
  setInterval(() => void refreshState(), 1000);
  setInterval(renderAll, 250);
  renderAll();
}

void start();
