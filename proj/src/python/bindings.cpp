#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

#include "logicforge/protocol/scoring.h"
#include "logicforge/version.h"

namespace py = pybind11;
using namespace logicforge;

PYBIND11_MODULE(logicforge, m) {
  m.doc() = "Answer extraction and binary rewards for generated logic puzzles.";
  m.attr("__version__") = std::string(kVersion);

  static py::exception<UnknownTaskError> unknown_task(m, "UnknownTaskError", PyExc_KeyError);
  static py::exception<StructuralError> structural(m, "StructuralError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const UnknownTaskError& e) {
      PyErr_SetString(unknown_task.ptr(), e.what());
    } catch (const StructuralError& e) {
      PyErr_SetString(structural.ptr(), e.what());
    } catch (const scoring::BatchError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def(
      "score_response",
      [](std::string_view task, std::string_view instance_json, std::string_view response) {
        py::gil_scoped_release release;
        return scoring::score_response(task, instance_json, response);
      },
      py::arg("task"), py::arg("instance_json"), py::arg("response"),
      "1 when the response is in think/answer format and its answer is correct, else 0.");

  m.def(
      "score_batch",
      [](const std::vector<std::tuple<std::string, std::string, std::string>>& items) {
        std::vector<scoring::BatchItem> batch;
        batch.reserve(items.size());
        for (const auto& [task, instance, response] : items) batch.push_back({task, instance, response});
        py::gil_scoped_release release;
        return scoring::score_batch(batch);
      },
      py::arg("items"),
      "score_response over (task, instance_json, response) triples. Raises ValueError naming the "
      "index of the first bad item, or on an empty batch.");

  m.def(
      "extract_answer", [](std::string_view response) { return scoring::extract_answer(response); },
      py::arg("response"), "Trimmed text of the last answer tag, or None when the format is not followed.");
}
