#pragma once

#include <string>
#include <vector>

#include "windatc/study_runner.hpp"

namespace windatc::study {

class ReportError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Writes <name>.csv (columns study,param,hour,atc_mw,status,iters) and, when
/// there are rows, <name>.svg into the directory. Returns the file paths.
std::vector<std::string> emit_outputs(const StudyResult& result, const std::string& directory);

}  // namespace windatc::study
