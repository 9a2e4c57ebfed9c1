/** The three live panels: program text with marks, current term, status. */

import { segmentText } from "./highlight.js";
import type { HighlightRange, Snapshot } from "./types.js";

export interface ProgramSection {
  name: string;
  text: string;
}

/** Repaint the executed-program panel: one section per module, marks applied. */
export function renderProgramPanel(
  container: HTMLElement,
  sections: ProgramSection[],
  ranges: HighlightRange[],
): void {
  const doc = container.ownerDocument;
  container.textContent = "";
  for (const section of sections) {
    const heading = doc.createElement("h3");
    heading.textContent = section.name;
    container.appendChild(heading);

    const pre = doc.createElement("pre");
    pre.className = "module-text";
    pre.dataset.module = section.name;
    const own = ranges.filter((r) => r.module === section.name);
    for (const segment of segmentText(section.text, own)) {
      if (segment.marked) {
        const mark = doc.createElement("mark");
        mark.textContent = segment.text;
        pre.appendChild(mark);
      } else {
        pre.appendChild(doc.createTextNode(segment.text));
      }
    }
    container.appendChild(pre);
  }
}

/** Show the machine's current term verbatim, truncation dots included. */
export function renderTermPanel(container: HTMLElement, term: string): void {
  let pre = container.querySelector("pre");
  if (pre === null) {
    pre = container.ownerDocument.createElement("pre");
    pre.className = "term-text";
    container.appendChild(pre);
  }
  pre.textContent = term;
}

export function renderStatusBar(container: HTMLElement, snapshot: Snapshot): void {
  const mode =
    snapshot.mode.kind === "slow"
      ? `slow(${snapshot.mode.pauseMs}ms)`
      : snapshot.mode.kind;
  container.textContent =
    `${snapshot.machineStatus} · mode ${mode} · ` +
    `${snapshot.elementCount} elements · ${snapshot.elapsedMs} ms · ` +
    `program v${snapshot.programVersion}` +
    (snapshot.errorMessage !== null ? ` · ${snapshot.errorMessage}` : "");
  container.classList.toggle("status-error", snapshot.errorMessage !== null);
}

export interface Layout {
  statusBar: HTMLElement;
  banner: HTMLElement;
  editorPanel: HTMLElement;
  programPanel: HTMLElement;
  termPanel: HTMLElement;
  controlSlot: HTMLElement;
}

/** Build the static page skeleton inside `root` and hand out the slots. */
export function buildLayout(root: HTMLElement): Layout {
  const doc = root.ownerDocument;
  root.textContent = "";

  const header = doc.createElement("header");
  const title = doc.createElement("h1");
  title.textContent = "termbeat";
  header.appendChild(title);
  const statusBar = doc.createElement("div");
  statusBar.className = "status-bar";
  header.appendChild(statusBar);
  const controlSlot = doc.createElement("div");
  controlSlot.className = "control-slot";
  header.appendChild(controlSlot);
  root.appendChild(header);

  const banner = doc.createElement("div");
  banner.className = "reconnect-banner";
  banner.textContent = "connection lost — reconnecting…";
  banner.hidden = true;
  root.appendChild(banner);

  const grid = doc.createElement("div");
  grid.className = "panel-grid";

  const editorPanel = doc.createElement("section");
  editorPanel.className = "panel editor-panel";
  const editorTitle = doc.createElement("h2");
  editorTitle.textContent = "Editor";
  editorPanel.appendChild(editorTitle);
  grid.appendChild(editorPanel);

  const programPanel = doc.createElement("section");
  programPanel.className = "panel program-panel";
  const programTitle = doc.createElement("h2");
  programTitle.textContent = "Executed program";
  grid.appendChild(programPanel);
  const programBody = doc.createElement("div");
  programPanel.appendChild(programTitle);
  programPanel.appendChild(programBody);

  const termPanel = doc.createElement("section");
  termPanel.className = "panel term-panel";
  const termTitle = doc.createElement("h2");
  termTitle.textContent = "Current term";
  termPanel.appendChild(termTitle);
  grid.appendChild(termPanel);

  root.appendChild(grid);

  return {
    statusBar,
    banner,
    editorPanel,
    programPanel: programBody,
    termPanel,
    controlSlot,
  };
}
