// Browser entry point.

import { startApp } from "./app.js";

const root = document.getElementById("app");
if (root === null) {
  throw new Error("missing #app mount point");
}
startApp({ root });
