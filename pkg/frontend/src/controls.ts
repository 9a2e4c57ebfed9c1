/** Conductor control bar: execution mode, pause/resume/step/restart. */

import type { Snapshot } from "./types.js";

export interface ControlHandlers {
  send(command: string, mode?: string, pauseMs?: number): void;
}

export class ControlBar {
  readonly root: HTMLElement;
  private readonly modeSelect: HTMLSelectElement;
  private readonly pauseInput: HTMLInputElement;
  private readonly stepButton: HTMLButtonElement;

  constructor(parent: HTMLElement, handlers: ControlHandlers) {
    const doc = parent.ownerDocument;
    this.root = doc.createElement("div");
    this.root.className = "control-bar";

    this.modeSelect = doc.createElement("select");
    this.modeSelect.className = "mode-select";
    for (const kind of ["realtime", "slow", "step"]) {
      const option = doc.createElement("option");
      option.value = kind;
      option.textContent = kind;
      this.modeSelect.appendChild(option);
    }
    this.root.appendChild(this.modeSelect);

    this.pauseInput = doc.createElement("input");
    this.pauseInput.type = "number";
    this.pauseInput.min = "0";
    this.pauseInput.value = "300";
    this.pauseInput.className = "pause-input";
    this.pauseInput.title = "pause between elements (ms, slow mode)";
    this.root.appendChild(this.pauseInput);

    const apply = doc.createElement("button");
    apply.type = "button";
    apply.className = "apply-mode";
    apply.textContent = "Set mode";
    apply.addEventListener("click", () => {
      const kind = this.modeSelect.value;
      if (kind === "slow") {
        handlers.send("setMode", kind, Number(this.pauseInput.value));
      } else {
        handlers.send("setMode", kind);
      }
    });
    this.root.appendChild(apply);

    const simple = (command: string, label: string): HTMLButtonElement => {
      const button = doc.createElement("button");
      button.type = "button";
      button.className = `control-${command}`;
      button.textContent = label;
      button.addEventListener("click", () => handlers.send(command));
      this.root.appendChild(button);
      return button;
    };
    simple("pause", "Pause");
    simple("resume", "Resume");
    this.stepButton = simple("step", "Step");
    this.stepButton.disabled = true;
    this.stepButton.title = "single-step mode only";
    simple("restart", "Restart");

    parent.appendChild(this.root);
  }

  /** Mirror the session's mode; the step button only works in single-step. */
  update(snapshot: Snapshot): void {
    this.stepButton.disabled = snapshot.mode.kind !== "step";
    const doc = this.root.ownerDocument;
    if (doc.activeElement !== this.modeSelect) {
      this.modeSelect.value = snapshot.mode.kind;
    }
    if (snapshot.mode.kind === "slow" && doc.activeElement !== this.pauseInput) {
      this.pauseInput.value = String(snapshot.mode.pauseMs);
    }
  }
}
