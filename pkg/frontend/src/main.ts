import { renderDashboard, renderHome } from "./views";
import "./style.css";

function route(): void {
  const root = document.getElementById("app");
  if (!root) return;
  const match = window.location.hash.match(/^#\/session\/([A-Za-z0-9-]+)/);
  if (match) {
    void renderDashboard(root, match[1]);
  } else {
    void renderHome(root);
  }
}

window.addEventListener("hashchange", route);
window.addEventListener("DOMContentLoaded", route);
