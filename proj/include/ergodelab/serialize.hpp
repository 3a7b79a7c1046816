#pragma once

#include <string>
#include <vector>

#include "ergodelab/measure.hpp"
#include "ergodelab/stieltjes.hpp"

namespace ergodelab {

// Shortest decimal text that parses back to exactly the same double.
// Non-finite values come out as "inf", "-inf", "nan".
std::string format_double(double x);

// Columnar text table.  Cells are stored verbatim; anything containing a
// comma, quote or newline is quoted on output.  Row width must match the
// header, so a table that builds at all is rectangular.
class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> header);

    CsvTable& row(std::vector<std::string> cells);
    size_t rows() const { return rows_.size(); }

    // header then rows, '\n' after every line
    std::string str() const;

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// JSON documents carry schema: 1 and a kind tag.  Functions built by the
// registry factories serialize as {"builtin": name, "params": [...]}; a
// hand-assembled function falls back to its representation triple with the
// measure spelled out (atoms as [location, mass] pairs, density by registry
// name).  A density that did not come from make_density has no portable
// form, and serializing it throws PreconditionFailed.  Infinite parameters
// are written as the strings "inf" / "-inf" since JSON numbers cannot
// carry them.
std::string to_json(const RadonMeasure& mu);
std::string to_json(const StieltjesFunction& g);
std::string to_json(const CompleteBernsteinFunction& f);

RadonMeasure measure_from_json(const std::string& text);
StieltjesFunction stieltjes_from_json(const std::string& text);
CompleteBernsteinFunction cbf_from_json(const std::string& text);

}  // namespace ergodelab
