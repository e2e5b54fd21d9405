import { init } from "./app.js";

const root = document.getElementById("app");
if (root) {
  init(root);
}
