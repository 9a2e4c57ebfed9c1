/** Transient notification stack. */

export class ToastStack {
  private readonly container: HTMLElement;

  constructor(
    parent: HTMLElement,
    private readonly lifetimeMs = 4000,
  ) {
    this.container = parent.ownerDocument.createElement("div");
    this.container.className = "toasts";
    parent.appendChild(this.container);
  }

  show(message: string, kind: "error" | "info" = "error"): void {
    const doc = this.container.ownerDocument;
    const toast = doc.createElement("div");
    toast.className = `toast toast-${kind}`;
    toast.setAttribute("role", "status");
    toast.textContent = message;
    this.container.appendChild(toast);
    setTimeout(() => toast.remove(), this.lifetimeMs);
  }
}
