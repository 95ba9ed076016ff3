import { ApiClient } from "./api.js";
import { collectElements, ConsoleApp } from "./app.js";

const app = new ConsoleApp(new ApiClient(""), collectElements(document));
void app.loadTasks();
app.render();
