// Confirmation gate: every state-mutating action is staged here and the
// request only fires on an explicit confirm. Cancelling discards it.

export type ActionKind = "setpoint" | "mode" | "reset" | "reset-all" | "schedule";

export interface PendingAction {
  kind: ActionKind;
  label: string;
  execute: () => Promise<unknown>;
}

export class ConfirmGate {
  private pending: PendingAction | null = null;

  constructor(private onChange: () => void = () => {}) {}

  get current(): PendingAction | null {
    return this.pending;
  }

  stage(action: PendingAction): void {
    this.pending = action;
    this.onChange();
  }

  async confirm(): Promise<void> {
    const action = this.pending;
    if (!action) return;
    this.pending = null;
    this.onChange();
    await action.execute();
  }

  cancel(): void {
    this.pending = null;
    this.onChange();
  }
}
