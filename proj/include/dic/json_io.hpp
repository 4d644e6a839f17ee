// JSON serialization for mechanisms, multi-agent tables and distributions.
// Numbers are written with 17 significant digits so coefficients round-trip
// to the exact same binary values.

#pragma once

#include <stdexcept>
#include <string>

#include "dic/distribution.hpp"
#include "dic/mechanism.hpp"
#include "dic/multi_agent.hpp"

namespace dic {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string fmt17(double v);

std::string to_json(const SingleAgentMechanism& m);
std::string to_json(const MultiAgentTable& t);
std::string to_json(const GridDistribution& d);

enum class FileKind { SingleAgentMechanism, MultiAgentTable, Distribution };
FileKind detect_kind(const std::string& json_text);

SingleAgentMechanism mechanism_from_json(const std::string& json_text);
MultiAgentTable table_from_json(const std::string& json_text);
GridDistribution distribution_from_json(const std::string& json_text);

}  // namespace dic
