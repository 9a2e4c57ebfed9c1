/** Browser entry point: boot the client against the serving session. */

import { App } from "./app.js";

const params = new URLSearchParams(window.location.search);
const root = document.getElementById("app");
if (root !== null) {
  const app = new App({
    root,
    role: params.get("role") === "conductor" ? "conductor" : "participant",
    token: params.get("token"),
  });
  void app.start();
}
