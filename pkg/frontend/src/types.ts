/** JSON shapes exchanged with the session service. */

export interface HighlightRange {
  module: string;
  /** 1-based, end-inclusive coordinates. */
  startLine: number;
  startCol: number;
  endLine: number;
  endCol: number;
}

export interface HighlightSet {
  phaseIndex: number;
  ranges: HighlightRange[];
}

export type ModeJson =
  | { kind: "realtime" }
  | { kind: "slow"; pauseMs: number }
  | { kind: "step" };

export interface WaitEvent {
  atMs: number;
  kind: "wait";
  durationMs: number;
}

export interface NoteEvent {
  atMs: number;
  kind: "on" | "off";
  channel: number;
  pitch: number;
  velocity: number;
}

export interface ProgramEvent {
  atMs: number;
  kind: "pgm";
  channel: number;
  program: number;
}

export interface ControlEvent {
  atMs: number;
  kind: "ctrl";
  channel: number;
  number: number;
  value: number;
}

export type EventJson = WaitEvent | NoteEvent | ProgramEvent | ControlEvent;

export interface Snapshot {
  programVersion: number;
  machineStatus: string;
  errorMessage: string | null;
  mode: ModeJson;
  elapsedMs: number;
  elementCount: number;
  renderedTerm: string;
  latestHighlights: HighlightSet;
  recentEvents: EventJson[];
}

export interface ModuleSummary {
  name: string;
  version: number;
  hasEditableRegion: boolean;
}

export interface ModuleDetail {
  name: string;
  protectedText: string;
  editableText: string | null;
  /** 1-based line where the editable region starts, null without a marker. */
  editableFromLine: number | null;
  version: number;
}

export interface Diagnostic {
  module: string;
  line: number;
  col: number;
  message: string;
}

export interface SubmissionResult {
  accepted: boolean;
  diagnostics: Diagnostic[];
  newVersion: number | null;
  message?: string;
}

export interface ControlResult {
  ok: boolean;
  message: string;
}

export type Role = "conductor" | "participant";

/** Full module text as displayed in the executed-program panel. */
export function fullModuleText(m: ModuleDetail): string {
  return m.protectedText + (m.editableText ?? "");
}
