import { beforeEach, describe, expect, it, vi } from "vitest";

import { ModuleEditor } from "../src/editor.js";
import type { DraftState } from "../src/state.js";
import type { ModuleDetail } from "../src/types.js";

const detailFixture = (overrides: Partial<ModuleDetail> = {}): ModuleDetail => ({
  name: "Melody",
  protectedText: "module Melody where\n-- edit below\n",
  editableText: "main = note qn c ;\n",
  editableFromLine: 3,
  version: 1,
  ...overrides,
});

const draftFixture = (overrides: Partial<DraftState> = {}): DraftState => ({
  text: "main = note qn c ;\n",
  baseVersion: 1,
  inFlight: false,
  diagnostics: [],
  conflict: null,
  ...overrides,
});

let host: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = "";
  host = document.createElement("div");
  document.body.appendChild(host);
});

function mount(detail: ModuleDetail, draft: DraftState, onSubmit = vi.fn()) {
  const editor = new ModuleEditor(document, detail.name, detail, draft, onSubmit);
  host.appendChild(editor.root);
  return { editor, onSubmit };
}

function textarea(): HTMLTextAreaElement {
  return host.querySelector("textarea") as HTMLTextAreaElement;
}

function typeDraft(text: string): void {
  const area = textarea();
  area.value = text;
  area.dispatchEvent(new Event("input"));
}

describe("ModuleEditor layout", () => {
  it("shows the protected region read-only above the editable area", () => {
    mount(detailFixture(), draftFixture());
    const pre = host.querySelector("pre.protected-region");
    expect(pre?.textContent).toBe("module Melody where\n-- edit below\n");
    // the protected text lives in a <pre>, not in any editable control
    expect(pre?.querySelector("textarea, input")).toBeNull();
    expect(textarea().value).toBe("main = note qn c ;\n");
    const divider = host.querySelector(".editable-divider");
    expect(divider?.textContent).toContain("editable from line 3");
  });

  it("keeps the draft object in sync with typing", () => {
    const draft = draftFixture();
    mount(detailFixture(), draft);
    typeDraft("main = [] ;\n");
    expect(draft.text).toBe("main = [] ;\n");
  });

  it("updateProtected adopts server text without touching the draft", () => {
    const draft = draftFixture();
    const { editor } = mount(detailFixture(), draft);
    typeDraft("main = hn ;\n");
    editor.updateProtected(
      detailFixture({ protectedText: "module Melody where\n-- new header\n" }),
    );
    expect(host.querySelector("pre.protected-region")?.textContent).toContain(
      "new header",
    );
    expect(textarea().value).toBe("main = hn ;\n");
    expect(draft.text).toBe("main = hn ;\n");
  });
});

describe("ModuleEditor submission wiring", () => {
  it("invokes the submit callback on send", () => {
    const { onSubmit } = mount(detailFixture(), draftFixture());
    (host.querySelector(".send-button") as HTMLButtonElement).click();
    expect(onSubmit).toHaveBeenCalledTimes(1);
  });

  it("ignores clicks while a submission is in flight", () => {
    const draft = draftFixture({ inFlight: true });
    const { onSubmit } = mount(detailFixture(), draft);
    const button = host.querySelector(".send-button") as HTMLButtonElement;
    expect(button.disabled).toBe(true);
    button.dispatchEvent(new Event("click"));
    expect(onSubmit).not.toHaveBeenCalled();
  });
});

describe("ModuleEditor diagnostics", () => {
  it("anchors diagnostics at the line and column inside the editable region", () => {
    const draft = draftFixture({
      text: "main = note qn c ++\n   broken ;\n",
      diagnostics: [
        { module: "Melody", line: 4, col: 4, message: "unbound identifier `broken`" },
      ],
    });
    mount(detailFixture(), draft);
    const entry = host.querySelector(".diagnostic") as HTMLElement;
    // module line 4 minus editableFromLine 3 -> local line 2
    expect(entry.dataset.line).toBe("2");
    expect(entry.dataset.col).toBe("4");
    expect(entry.textContent).toContain("line 2, col 4");
    expect(entry.textContent).toContain("unbound identifier `broken`");
    const context = entry.querySelector(".diagnostic-context");
    expect(context?.textContent).toBe("   broken ;\n   ^");
  });

  it("falls back to module coordinates for diagnostics above the divider", () => {
    const draft = draftFixture({
      diagnostics: [
        { module: "Prelude", line: 1, col: 1, message: "duplicate definition" },
      ],
    });
    mount(detailFixture(), draft);
    const entry = host.querySelector(".diagnostic") as HTMLElement;
    expect(entry.textContent).toContain("Prelude line 1, col 1");
    expect(entry.querySelector(".diagnostic-context")).toBeNull();
  });
});

describe("ModuleEditor conflict prompt", () => {
  it("offers reload, which adopts the server text and version", () => {
    const draft = draftFixture({
      text: "main = mine ;\n",
      conflict: { serverVersion: 4, serverEditableText: "main = theirs ;\n" },
    });
    const { editor } = mount(detailFixture(), draft);
    typeDraft("main = mine ;\n");
    editor.refresh();
    expect(host.querySelector(".conflict")?.textContent).toContain("v4");
    (host.querySelector(".conflict-reload") as HTMLButtonElement).click();
    expect(textarea().value).toBe("main = theirs ;\n");
    expect(draft.text).toBe("main = theirs ;\n");
    expect(draft.baseVersion).toBe(4);
    expect(draft.conflict).toBeNull();
  });

  it("offers keep-mine, which rebases without changing a byte", () => {
    const draft = draftFixture({
      text: "main = mine ;\n",
      conflict: { serverVersion: 4, serverEditableText: "main = theirs ;\n" },
    });
    const { editor } = mount(detailFixture(), draft);
    typeDraft("main = mine ;\n");
    editor.refresh();
    (host.querySelector(".conflict-keep") as HTMLButtonElement).click();
    expect(textarea().value).toBe("main = mine ;\n");
    expect(draft.baseVersion).toBe(4);
    expect(draft.conflict).toBeNull();
  });
});
