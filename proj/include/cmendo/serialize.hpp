#pragma once

#include <string>

#include "cmendo/certificate.hpp"
#include "cmendo/requirements.hpp"
#include "cmendo/textio.hpp"

namespace cmendo {

// Version tags on the first line of each document.
inline constexpr const char* kCertificateTag = "cmendo-cert/1";
inline constexpr const char* kClassGroupTag = "cmendo-classgroup/1";
inline constexpr const char* kRequirementsTag = "cmendo-requirements/1";
inline constexpr const char* kIdealTag = "cmendo-ideal/1";

// Sections reused inside larger documents.
TextNode ideal_node(const std::string& key, const OFIdeal& a);
OFIdeal ideal_from_node(const TextNode& n, const RealOrder* OF = nullptr);
TextNode relation_node(const Relation& R);
Relation relation_from_node(const TextNode& n);

std::string write_ideal(const OFIdeal& a);
OFIdeal read_ideal(const std::string& text, const RealOrder* OF = nullptr);

std::string write_relation(const Relation& R);
Relation read_relation(const std::string& text);

std::string write_certificate(const Certificate& c);
Certificate read_certificate(const std::string& text);

std::string write_class_group(const ClassGroupData& G, const WeilContext& ctx);
// Rebuilds the order from cm; the field description must match.
ClassGroupPtr read_class_group(const std::string& text, const CMField& cm);

std::string write_requirements(const RequirementsReport& r);
RequirementsReport read_requirements(const std::string& text);

}  // namespace cmendo
