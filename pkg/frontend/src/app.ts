/** Wires the panels, editors, control bar and feed into one client. */

import { Api, type FetchLike } from "./api.js";
import { ControlBar } from "./controls.js";
import { ModuleEditor } from "./editor.js";
import {
  buildLayout,
  renderProgramPanel,
  renderStatusBar,
  renderTermPanel,
  type Layout,
} from "./panels.js";
import { openFeed } from "./sse.js";
import { SessionView } from "./state.js";
import { ToastStack } from "./toast.js";
import { fullModuleText, type ModuleDetail, type Role, type Snapshot } from "./types.js";

export interface AppOptions {
  root: HTMLElement;
  /** Service origin; empty when the bundle is served by the session itself. */
  base?: string;
  role?: Role;
  token?: string | null;
  fetchImpl?: FetchLike;
  feedRetryMs?: number;
}

export class App {
  readonly view: SessionView;
  readonly api: Api;
  readonly editors = new Map<string, ModuleEditor>();
  private readonly root: HTMLElement;
  private readonly base: string;
  private readonly fetchImpl: FetchLike;
  private readonly feedRetryMs: number;
  private layout: Layout | null = null;
  private toasts: ToastStack | null = null;
  private controlBar: ControlBar | null = null;
  private readonly moduleDetails = new Map<string, ModuleDetail>();
  private fetchedAtVersion = 0;
  private refreshing = false;
  private stopFeed: (() => void) | null = null;

  constructor(options: AppOptions) {
    this.root = options.root;
    this.base = options.base ?? "";
    this.fetchImpl =
      options.fetchImpl ?? ((input, init) => fetch(input, init));
    this.feedRetryMs = options.feedRetryMs ?? 1000;
    this.view = new SessionView(options.role ?? "participant");
    this.api = new Api(this.base, options.token ?? null, this.fetchImpl);
  }

  async start(): Promise<void> {
    this.layout = buildLayout(this.root);
    this.toasts = new ToastStack(this.root);
    if (this.view.role === "conductor") {
      this.controlBar = new ControlBar(this.layout.controlSlot, {
        send: (command, mode, pauseMs) => {
          void this.sendControl(command, mode, pauseMs);
        },
      });
    }

    const snapshot = await this.api.getSnapshot();
    this.view.acceptSnapshot(snapshot);
    this.fetchedAtVersion = snapshot.programVersion;
    await this.refreshModules();
    this.renderSnapshot(snapshot);

    this.stopFeed = openFeed(
      `${this.base}/api/feed`,
      {
        onData: (payload) => this.onFeedData(payload),
        onStateChange: (up) => {
          if (this.layout !== null) this.layout.banner.hidden = up;
        },
      },
      { fetchImpl: this.fetchImpl, retryMs: this.feedRetryMs },
    );
  }

  stop(): void {
    this.stopFeed?.();
    this.stopFeed = null;
  }

  /** Submit a module's draft; every path leaves the editor buffer untouched. */
  async submit(name: string): Promise<void> {
    const draft = this.view.draft(name);
    const editor = this.editors.get(name);
    if (editor === undefined || draft.inFlight) return;
    draft.inFlight = true;
    editor.refresh();
    try {
      const { status, body } = await this.api.submitEditable(
        name,
        draft.text,
        draft.baseVersion,
      );
      if (status === 200 && body.newVersion !== null) {
        draft.baseVersion = body.newVersion;
        draft.diagnostics = [];
        draft.conflict = null;
        this.toasts?.show(`${name} accepted as v${body.newVersion}`, "info");
      } else if (status === 409) {
        const detail = await this.api.getModule(name);
        draft.conflict = {
          serverVersion: detail?.version ?? draft.baseVersion,
          serverEditableText: detail?.editableText ?? "",
        };
      } else if (body.diagnostics.length > 0) {
        draft.diagnostics = body.diagnostics;
      } else {
        this.toasts?.show(body.message ?? `submission failed (${status})`);
      }
    } catch {
      this.toasts?.show("network failure — draft kept, try again");
    } finally {
      draft.inFlight = false;
      editor.refresh();
    }
  }

  private async sendControl(
    command: string,
    mode?: string,
    pauseMs?: number,
  ): Promise<void> {
    try {
      const { body } = await this.api.control(command, mode, pauseMs);
      if (!body.ok) this.toasts?.show(body.message);
    } catch {
      this.toasts?.show("network failure — control not delivered");
    }
  }

  private onFeedData(payload: string): void {
    let snapshot: Snapshot;
    try {
      snapshot = JSON.parse(payload) as Snapshot;
    } catch {
      return;
    }
    if (!this.view.acceptSnapshot(snapshot)) return;
    this.renderSnapshot(snapshot);
    if (snapshot.programVersion > this.fetchedAtVersion) {
      this.fetchedAtVersion = snapshot.programVersion;
      void this.refreshModules();
    }
  }

  private renderSnapshot(snapshot: Snapshot): void {
    if (this.layout === null) return;
    renderStatusBar(this.layout.statusBar, snapshot);
    renderTermPanel(this.layout.termPanel, snapshot.renderedTerm);
    this.paintProgram();
    this.controlBar?.update(snapshot);
  }

  private paintProgram(): void {
    if (this.layout === null) return;
    const sections = [...this.moduleDetails.values()]
      .sort((a, b) => a.name.localeCompare(b.name))
      .map((d) => ({ name: d.name, text: fullModuleText(d) }));
    const ranges = this.view.snapshot?.latestHighlights.ranges ?? [];
    renderProgramPanel(this.layout.programPanel, sections, ranges);
  }

  /** Re-read module texts after a version change; drafts are never touched. */
  private async refreshModules(): Promise<void> {
    if (this.refreshing || this.layout === null) return;
    this.refreshing = true;
    try {
      const list = await this.api.listModules();
      const details = await Promise.all(
        list.map((m) => this.api.getModule(m.name)),
      );
      for (const detail of details) {
        if (detail === null) continue;
        this.moduleDetails.set(detail.name, detail);
        const existing = this.editors.get(detail.name);
        if (existing !== undefined) {
          existing.updateProtected(detail);
        } else if (detail.editableText !== null) {
          const draft = this.view.draft(detail.name);
          draft.text = detail.editableText;
          draft.baseVersion = detail.version;
          const editor = new ModuleEditor(
            this.root.ownerDocument,
            detail.name,
            detail,
            draft,
            () => void this.submit(detail.name),
          );
          this.editors.set(detail.name, editor);
          this.layout.editorPanel.appendChild(editor.root);
        }
      }
      this.paintProgram();
    } finally {
      this.refreshing = false;
    }
  }
}
