// Application shell: tab navigation, the always-visible quick access panel
// (hamburger overlay on narrow screens), 1-second state polling, flash
// banners, and the shared confirmation dialog.

import { ApiClient, HttpTransport } from "./client.js";
import { ConfirmGate } from "./confirm.js";
import { FlashQueue } from "./flash.js";
import { WEEKDAYS } from "./types.js";
import { NotificationsPage } from "./views/notifications.js";
import { ProfilesPage } from "./views/profiles.js";
import { QuickPanel } from "./views/quick.js";
import { SchedulePage } from "./views/schedule.js";
import { XaiOverlay } from "./views/xai.js";

const API_BASE = (window as { HEATLAB_API?: string }).HEATLAB_API ?? "http://127.0.0.1:8000";

const api = new ApiClient(new HttpTransport(API_BASE));

const confirmRoot = document.getElementById("confirm-dialog")!;
const gate = new ConfirmGate(() => renderConfirm());

function renderConfirm(): void {
  const action = gate.current;
  if (!action) {
    confirmRoot.classList.add("hidden");
    confirmRoot.innerHTML = "";
    return;
  }
  confirmRoot.classList.remove("hidden");
  confirmRoot.innerHTML = `<div class="overlay"><div class="overlay-card">
    <p>${action.label}</p>
    <div class="overlay-actions">
      <button id="confirm-yes" class="primary">${action.kind === "reset" || action.kind === "reset-all" ? "Reset" : "Save"}</button>
      <button id="confirm-cancel">Cancel</button>
    </div>
  </div></div>`;
  document.getElementById("confirm-yes")!.addEventListener("click", () => void gate.confirm());
  document.getElementById("confirm-cancel")!.addEventListener("click", () => gate.cancel());
}

const flashRoot = document.getElementById("flash-root")!;
const flashes = new FlashQueue(4000, (texts) => {
  flashRoot.innerHTML = texts.map((t) => `<div class="flash">${t}</div>`).join("");
});

const quick = new QuickPanel(
  document.getElementById("quick-panel")!,
  api,
  gate,
  () => void pollState()
);
const overlay = new XaiOverlay(document.getElementById("xai-root")!, api);
const schedule = new SchedulePage(
  document.getElementById("page-schedule")!,
  api,
  gate,
  () => void reloadSchedule()
);
const profiles = new ProfilesPage(
  document.getElementById("page-profiles")!,
  api,
  gate,
  (profile) => void overlay.open(profile)
);
const notifications = new NotificationsPage(document.getElementById("page-notifications")!, api);

let activeProfile = "Nights";
let flashesPrimed = false;

function showTab(tab: string): void {
  for (const name of ["schedule", "profiles", "notifications"]) {
    document.getElementById(`page-${name}`)!.classList.toggle("hidden", name !== tab);
    document.querySelector(`[data-tab="${name}"]`)!.classList.toggle("selected", name === tab);
  }
  if (tab === "profiles") void profiles.show(activeProfile);
  if (tab === "notifications") void notifications.reload();
  if (tab === "schedule") void reloadSchedule();
}

async function reloadSchedule(): Promise<void> {
  schedule.update(await api.getSchedule());
}

async function pollState(): Promise<void> {
  try {
    const state = await api.getState(quick.summary);
    activeProfile = state.active_profile;
    quick.update(state);
    const weekday = WEEKDAYS[(new Date(state.time).getUTCDay() + 6) % 7];
    schedule.setToday(weekday);
    document.getElementById("status-dot")!.className = "status ok";
  } catch {
    document.getElementById("status-dot")!.className = "status bad";
  }
}

async function pollFlashes(): Promise<void> {
  try {
    const { flashes: latest } = await api.getFlashes(flashes.lastSeenId);
    if (!flashesPrimed) {
      // Do not replay history on first load.
      for (const flash of latest) flashes.primeTo(flash.id);
      flashesPrimed = true;
      return;
    }
    flashes.push(latest);
  } catch {
    /* transient */
  }
}

for (const button of document.querySelectorAll<HTMLElement>("[data-tab]")) {
  button.addEventListener("click", () => showTab(button.dataset.tab!));
}
document.getElementById("hamburger")!.addEventListener("click", () => {
  document.getElementById("quick-panel")!.classList.toggle("open");
});

showTab("schedule");
void pollState();
void pollFlashes();
setInterval(() => void pollState(), 1000);
setInterval(() => void pollFlashes(), 1500);
