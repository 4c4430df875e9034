#pragma once

#include <nlohmann/json.hpp>

#include "ckme/metric_space.hpp"
#include "ckme/oracle.hpp"
#include "ckme/output_kernel.hpp"
#include "ckme/schedules.hpp"

/// JSON forms of the library types used in experiment configs and snapshots.
/// Parsers reject unknown fields and throw ValidationError with the path of
/// the offending member.
namespace ckme::json_io {

using nlohmann::json;

json write(const MetricSpace& space);
json write(const InputDistribution& dist);
json write(const OutputKernel& kernel);
json write(const MotherSmoother& mother);
/// The dimension is implied by the space and not written.
json write(const RateSchedule& schedule);
json write(const MeanFunction& mean);
json write(const Noise& noise);
json write(const InputPoint& x);

MetricSpace read_space(const json& j, const std::string& where);
InputDistribution read_input_distribution(const json& j, const std::string& where);
OutputKernel read_output_kernel(const json& j, const std::string& where);
MotherSmoother read_mother(const json& j, const std::string& where);
RateSchedule read_schedule(const json& j, int dimension, const std::string& where);
MeanFunction read_mean(const json& j, const std::string& where);
Noise read_noise(const json& j, const std::string& where);
InputPoint read_point(const json& j, const std::string& where);

/// Throws ValidationError if `j` is not an object or has a key outside `allowed`.
void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& where);

double read_positive(const json& j, const char* key, const std::string& where);
double read_number(const json& j, const char* key, const std::string& where);
int read_positive_int(const json& j, const char* key, const std::string& where);

} // namespace ckme::json_io
