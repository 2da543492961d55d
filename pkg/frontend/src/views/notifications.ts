// Notifications page: paginated date/time/category/description table with
// category checkboxes and a date-range selector.

import type { ApiClient } from "../client.js";
import type { NotificationsPayload } from "../types.js";

export class NotificationsPage {
  private payload: NotificationsPayload | null = null;
  private categories = new Set(["user", "system"]);
  private from = "";
  private to = "";
  private page = 1;
  private readonly pageSize = 12;
  private error = "";

  constructor(private root: HTMLElement, private api: ApiClient) {
    this.root.addEventListener("click", (event) => this.onClick(event));
    this.root.addEventListener("change", (event) => this.onChange(event));
  }

  async reload(): Promise<void> {
    try {
      this.payload = await this.api.getNotifications({
        categories: [...this.categories],
        from: this.from || undefined,
        to: this.to || undefined,
        page: this.page,
        pageSize: this.pageSize,
      });
      this.error = "";
    } catch (err) {
      this.error = err instanceof Error ? err.message : String(err);
    }
    this.render();
  }

  private onChange(event: Event): void {
    const target = event.target as HTMLInputElement;
    if (target.dataset.category) {
      if (target.checked) this.categories.add(target.dataset.category);
      else this.categories.delete(target.dataset.category);
      this.page = 1;
    } else if (target.id === "date-from") {
      this.from = target.value;
      this.page = 1;
    } else if (target.id === "date-to") {
      this.to = target.value;
      this.page = 1;
    }
    void this.reload();
  }

  private onClick(event: Event): void {
    const target = event.target as HTMLElement;
    if (target.dataset.action === "prev" && this.page > 1) {
      this.page -= 1;
      void this.reload();
    } else if (target.dataset.action === "next" && this.payload) {
      const pages = Math.max(Math.ceil(this.payload.total / this.pageSize), 1);
      if (this.page < pages) {
        this.page += 1;
        void this.reload();
      }
    }
  }

  private render(): void {
    const p = this.payload;
    const pages = p ? Math.max(Math.ceil(p.total / this.pageSize), 1) : 1;
    const rows = (p?.records ?? [])
      .map(
        (r) => `<tr>
          <td>${r.at.slice(0, 10)}</td>
          <td>${r.at.slice(11, 16)}</td>
          <td><span class="badge ${r.category}">${r.category}</span></td>
          <td>${r.message}</td>
        </tr>`
      )
      .join("");
    this.root.innerHTML = `
      <div class="page-heading">
        <h2>Notifications</h2>
        <span class="spacer"></span>
        <label>from <input type="date" id="date-from" value="${this.from}"></label>
        <label>to <input type="date" id="date-to" value="${this.to}"></label>
        <label><input type="checkbox" data-category="user" ${this.categories.has("user") ? "checked" : ""}> user</label>
        <label><input type="checkbox" data-category="system" ${this.categories.has("system") ? "checked" : ""}> system</label>
      </div>
      ${this.error ? `<p class="error">${this.error}</p>` : ""}
      <table class="notifications">
        <thead><tr><th>date</th><th>time</th><th>category</th><th>description</th></tr></thead>
        <tbody>${rows || `<tr><td colspan="4" class="placeholder">no notifications</td></tr>`}</tbody>
      </table>
      <div class="pager">
        <button data-action="prev" ${this.page <= 1 ? "disabled" : ""}>◀</button>
        <span>page ${this.page} of ${pages} (${p?.total ?? 0} records)</span>
        <button data-action="next" ${this.page >= pages ? "disabled" : ""}>▶</button>
      </div>`;
  }
}
