import { describe, expect, it } from "vitest";

import {
  buildLayout,
  renderProgramPanel,
  renderStatusBar,
  renderTermPanel,
} from "../src/panels.js";
import { snapshotFixture } from "./state.test.js";

function freshRoot(): HTMLElement {
  const root = document.createElement("div");
  document.body.appendChild(root);
  return root;
}

describe("renderProgramPanel", () => {
  it("paints exactly one marked span for a one-range highlight set", () => {
    const container = freshRoot();
    renderProgramPanel(
      container,
      [{ name: "Melody", text: "main =\n   note qn c ++ main ;\n" }],
      [{ module: "Melody", startLine: 2, startCol: 4, endLine: 2, endCol: 12 }],
    );
    const marks = container.querySelectorAll("mark");
    expect(marks.length).toBe(1);
    expect(marks[0].textContent).toBe("note qn c");
    expect(container.querySelector("pre")?.textContent).toBe(
      "main =\n   note qn c ++ main ;\n",
    );
  });

  it("renders no marks for an empty highlight set", () => {
    const container = freshRoot();
    renderProgramPanel(
      container,
      [{ name: "Melody", text: "main = [] ;\n" }],
      [],
    );
    expect(container.querySelectorAll("mark").length).toBe(0);
  });

  it("applies ranges only to their own module's section", () => {
    const container = freshRoot();
    renderProgramPanel(
      container,
      [
        { name: "Bass", text: "main = [] ;\n" },
        { name: "Melody", text: "main = [] ;\n" },
      ],
      [{ module: "Melody", startLine: 1, startCol: 1, endLine: 1, endCol: 4 }],
    );
    const bass = container.querySelector('pre[data-module="Bass"]');
    const melody = container.querySelector('pre[data-module="Melody"]');
    expect(bass?.querySelectorAll("mark").length).toBe(0);
    expect(melody?.querySelectorAll("mark").length).toBe(1);
  });

  it("repaints from scratch on every call", () => {
    const container = freshRoot();
    const sections = [{ name: "M", text: "x = 1 ;\n" }];
    renderProgramPanel(container, sections, [
      { module: "M", startLine: 1, startCol: 1, endLine: 1, endCol: 1 },
    ]);
    renderProgramPanel(container, sections, []);
    expect(container.querySelectorAll("mark").length).toBe(0);
    expect(container.querySelectorAll("pre").length).toBe(1);
  });
});

describe("renderTermPanel", () => {
  it("shows the rendered term verbatim, truncation dots included", () => {
    const container = freshRoot();
    const term = "Event (On c v) : (Wait qn : ...)";
    renderTermPanel(container, term);
    expect(container.querySelector("pre")?.textContent).toBe(term);
  });
});

describe("renderStatusBar", () => {
  it("summarizes status, mode, progress and version", () => {
    const container = freshRoot();
    renderStatusBar(
      container,
      snapshotFixture({
        machineStatus: "PAUSED",
        mode: { kind: "slow", pauseMs: 250 },
        elementCount: 7,
        elapsedMs: 1400,
        programVersion: 3,
      }),
    );
    expect(container.textContent).toContain("PAUSED");
    expect(container.textContent).toContain("slow(250ms)");
    expect(container.textContent).toContain("7 elements");
    expect(container.textContent).toContain("program v3");
  });

  it("surfaces the machine error message", () => {
    const container = freshRoot();
    renderStatusBar(
      container,
      snapshotFixture({
        machineStatus: "ERRORED",
        errorMessage: "step budget of 1000 exhausted",
      }),
    );
    expect(container.textContent).toContain("step budget of 1000 exhausted");
    expect(container.classList.contains("status-error")).toBe(true);
  });
});

describe("buildLayout", () => {
  it("creates the three panels, banner and control slot", () => {
    const root = freshRoot();
    const layout = buildLayout(root);
    expect(root.contains(layout.editorPanel)).toBe(true);
    expect(root.contains(layout.programPanel)).toBe(true);
    expect(root.contains(layout.termPanel)).toBe(true);
    expect(layout.banner.hidden).toBe(true);
    expect(layout.banner.textContent).toContain("reconnecting");
  });
});
