/** Per-module editor: read-only protected region, editable draft, results. */

import type { DraftState } from "./state.js";
import type { Diagnostic, ModuleDetail } from "./types.js";

export class ModuleEditor {
  readonly root: HTMLElement;
  private readonly protectedPre: HTMLPreElement;
  private readonly dividerLabel: HTMLElement;
  private readonly textarea: HTMLTextAreaElement;
  private readonly sendButton: HTMLButtonElement;
  private readonly diagnosticsBox: HTMLElement;
  private readonly conflictBox: HTMLElement;
  private editableFromLine: number;

  constructor(
    doc: Document,
    readonly name: string,
    detail: ModuleDetail,
    private readonly draft: DraftState,
    private readonly onSubmit: () => void,
  ) {
    this.editableFromLine = detail.editableFromLine ?? 1;
    this.root = doc.createElement("div");
    this.root.className = "module-editor";
    this.root.dataset.module = name;

    const heading = doc.createElement("h3");
    heading.textContent = name;
    this.root.appendChild(heading);

    this.protectedPre = doc.createElement("pre");
    this.protectedPre.className = "protected-region";
    this.protectedPre.textContent = detail.protectedText;
    this.root.appendChild(this.protectedPre);

    const divider = doc.createElement("div");
    divider.className = "editable-divider";
    this.dividerLabel = doc.createElement("span");
    divider.appendChild(this.dividerLabel);
    this.root.appendChild(divider);

    this.textarea = doc.createElement("textarea");
    this.textarea.className = "editable-region";
    this.textarea.spellcheck = false;
    this.textarea.value = this.draft.text;
    this.textarea.addEventListener("input", () => {
      this.draft.text = this.textarea.value;
    });
    this.root.appendChild(this.textarea);

    const controls = doc.createElement("div");
    controls.className = "editor-controls";
    this.sendButton = doc.createElement("button");
    this.sendButton.type = "button";
    this.sendButton.className = "send-button";
    this.sendButton.textContent = "Send";
    this.sendButton.addEventListener("click", () => {
      if (!this.draft.inFlight) this.onSubmit();
    });
    controls.appendChild(this.sendButton);
    this.root.appendChild(controls);

    this.diagnosticsBox = doc.createElement("div");
    this.diagnosticsBox.className = "diagnostics";
    this.root.appendChild(this.diagnosticsBox);

    this.conflictBox = doc.createElement("div");
    this.conflictBox.className = "conflict";
    this.root.appendChild(this.conflictBox);

    this.refresh();
  }

  /** Current editor buffer, byte-for-byte. */
  get draftText(): string {
    return this.textarea.value;
  }

  /** Adopt server-side changes to the read-only part; never touches the draft. */
  updateProtected(detail: ModuleDetail): void {
    this.protectedPre.textContent = detail.protectedText;
    this.editableFromLine = detail.editableFromLine ?? 1;
    this.refresh();
  }

  /** Sync buttons, diagnostics and conflict prompt to the draft state. */
  refresh(): void {
    this.sendButton.disabled = this.draft.inFlight;
    this.sendButton.textContent = this.draft.inFlight ? "Sending…" : "Send";
    this.dividerLabel.textContent = `editable from line ${this.editableFromLine} · based on v${this.draft.baseVersion}`;
    this.renderDiagnostics();
    this.renderConflict();
  }

  private renderDiagnostics(): void {
    const doc = this.root.ownerDocument;
    this.diagnosticsBox.textContent = "";
    for (const d of this.draft.diagnostics) {
      this.diagnosticsBox.appendChild(this.diagnosticEntry(doc, d));
    }
  }

  private diagnosticEntry(doc: Document, d: Diagnostic): HTMLElement {
    const entry = doc.createElement("div");
    entry.className = "diagnostic";
    const local = d.line - this.editableFromLine + 1;
    const inEditable = local >= 1;
    entry.dataset.line = String(inEditable ? local : d.line);
    entry.dataset.col = String(d.col);

    const where = doc.createElement("span");
    where.className = "diagnostic-pos";
    where.textContent = inEditable
      ? `line ${local}, col ${d.col}: `
      : `${d.module} line ${d.line}, col ${d.col}: `;
    entry.appendChild(where);

    const message = doc.createElement("span");
    message.className = "diagnostic-message";
    message.textContent = d.message;
    entry.appendChild(message);

    if (inEditable) {
      const lines = this.textarea.value.split("\n");
      const offending = lines[local - 1];
      if (offending !== undefined) {
        const context = doc.createElement("pre");
        context.className = "diagnostic-context";
        context.textContent = `${offending}\n${" ".repeat(Math.max(0, d.col - 1))}^`;
        entry.appendChild(context);
      }
    }
    return entry;
  }

  private renderConflict(): void {
    const doc = this.root.ownerDocument;
    this.conflictBox.textContent = "";
    const conflict = this.draft.conflict;
    if (conflict === null) return;

    const note = doc.createElement("p");
    note.textContent =
      `someone changed ${this.name} (server is at v${conflict.serverVersion}, ` +
      `your draft is based on v${this.draft.baseVersion})`;
    this.conflictBox.appendChild(note);

    const reload = doc.createElement("button");
    reload.type = "button";
    reload.className = "conflict-reload";
    reload.textContent = "Load server version";
    reload.addEventListener("click", () => {
      this.draft.text = conflict.serverEditableText;
      this.textarea.value = conflict.serverEditableText;
      this.draft.baseVersion = conflict.serverVersion;
      this.draft.conflict = null;
      this.draft.diagnostics = [];
      this.refresh();
    });
    this.conflictBox.appendChild(reload);

    const keep = doc.createElement("button");
    keep.type = "button";
    keep.className = "conflict-keep";
    keep.textContent = "Keep my draft";
    keep.addEventListener("click", () => {
      this.draft.baseVersion = conflict.serverVersion;
      this.draft.conflict = null;
      this.refresh();
    });
    this.conflictBox.appendChild(keep);
  }
}
