/**
 * Entry point: project picker on the left, annotation form and progress
 * dashboard side by side for the selected project.
 */

import { createAnnotateView } from './annotate.js';
import { ApiClient } from './api.js';
import { refreshDashboard } from './dashboard.js';
import { attachKeyboard } from './keyboard.js';

function el(tag: string, className?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  return node;
}

async function openProject(
  client: ApiClient,
  projectId: string,
  workArea: HTMLElement,
): Promise<void> {
  workArea.textContent = '';
  const annotatePane = el('div', 'annotate-pane');
  const dashboardPane = el('div', 'dashboard-pane');
  workArea.appendChild(annotatePane);
  workArea.appendChild(dashboardPane);

  const view = createAnnotateView({
    client,
    projectId,
    container: annotatePane,
    onSaved: () => {
      void refreshDashboard(client, projectId, dashboardPane);
    },
  });
  attachKeyboard(view, window);
  await view.load();
  await refreshDashboard(client, projectId, dashboardPane);
}

export async function start(root: HTMLElement, baseUrl = ''): Promise<void> {
  const client = new ApiClient(baseUrl);
  const picker = el('nav', 'projects');
  const workArea = el('main', 'work-area');
  root.appendChild(picker);
  root.appendChild(workArea);

  let projects;
  try {
    projects = await client.listProjects();
  } catch (error) {
    picker.textContent = `Cannot reach the annotation service: ${(error as Error).message}`;
    return;
  }

  for (const project of projects) {
    const button = document.createElement('button');
    button.className = 'project';
    button.textContent = `${project.name || project.project_id} (${project.units} units, ${project.engines.length} engines)`;
    button.addEventListener('click', () => {
      void openProject(client, project.project_id, workArea);
    });
    picker.appendChild(button);
  }
  if (projects.length === 0) {
    picker.textContent = 'No projects found in the service directory.';
  }
}

const mount = typeof document !== 'undefined' ? document.getElementById('app') : null;
if (mount) {
  void start(mount);
}
