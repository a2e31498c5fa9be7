// Reference recoverability baselines the computed matrix is compared
// against: what a forensic workstation is documented to recover from these
// four apps per acquisition mode. Shipped as data; the comparison relation
// is "computed covers reference" because manual file-system analysis
// recovers strictly more than the automated tooling these baselines describe
// (Viber contacts being the canonical example).

#include "imtriage/report.hpp"

namespace imtriage::report {

namespace {

using model::AppId;
using model::TaxonomyCategory;

MatrixCell none() { return MatrixCell{CellState::none, {}}; }
MatrixCell unknown() { return MatrixCell{CellState::unknown, {}}; }
MatrixCell yes() { return MatrixCell{CellState::found, {}}; }
MatrixCell tagged(std::set<Tag> tags) { return MatrixCell{CellState::found, std::move(tags)}; }

void fill_unknown(RecoverabilityMatrix& m) {
    static const AppId kApps[] = {AppId::skype, AppId::tango, AppId::viber, AppId::whatsapp};
    for (AppId app : kApps) {
        for (int c = 0; c < model::kTaxonomyCategoryCount; ++c) {
            m.cells[{app, static_cast<TaxonomyCategory>(c)}] = unknown();
        }
    }
}

RecoverabilityMatrix make_ios_filesystem() {
    RecoverabilityMatrix m;
    fill_unknown(m);  // rows absent from the baseline stay unknown

    // Installation data: "Yes" across all four
    m.cells[{AppId::skype, TaxonomyCategory::InstallationData}] = yes();
    m.cells[{AppId::viber, TaxonomyCategory::InstallationData}] = yes();
    m.cells[{AppId::tango, TaxonomyCategory::InstallationData}] = yes();
    m.cells[{AppId::whatsapp, TaxonomyCategory::InstallationData}] = yes();

    // Traffic: Skype "Call/Chat history", Viber "Call/Chat history",
    // Tango "No", WhatsApp "Chat history"
    m.cells[{AppId::skype, TaxonomyCategory::TrafficData}] = tagged({Tag::calls, Tag::chats});
    m.cells[{AppId::viber, TaxonomyCategory::TrafficData}] = tagged({Tag::calls, Tag::chats});
    m.cells[{AppId::tango, TaxonomyCategory::TrafficData}] = none();
    m.cells[{AppId::whatsapp, TaxonomyCategory::TrafficData}] = tagged({Tag::chats});

    // Content: Skype "Chat/Image", Viber "Chat/Image", Tango "Image",
    // WhatsApp "Chat/Image"
    m.cells[{AppId::skype, TaxonomyCategory::ContentData}] = tagged({Tag::text, Tag::image});
    m.cells[{AppId::viber, TaxonomyCategory::ContentData}] = tagged({Tag::text, Tag::image});
    m.cells[{AppId::tango, TaxonomyCategory::ContentData}] = tagged({Tag::image});
    m.cells[{AppId::whatsapp, TaxonomyCategory::ContentData}] = tagged({Tag::text, Tag::image});

    // User profile: Yes / No / Yes / No
    m.cells[{AppId::skype, TaxonomyCategory::UserProfileData}] = yes();
    m.cells[{AppId::viber, TaxonomyCategory::UserProfileData}] = none();
    m.cells[{AppId::tango, TaxonomyCategory::UserProfileData}] = yes();
    m.cells[{AppId::whatsapp, TaxonomyCategory::UserProfileData}] = none();

    // Contact database: Yes / No / <blank> / No. The blank Tango cell is
    // carried as unknown, not as a negative finding.
    m.cells[{AppId::skype, TaxonomyCategory::ContactDatabase}] = yes();
    m.cells[{AppId::viber, TaxonomyCategory::ContactDatabase}] = none();
    m.cells[{AppId::tango, TaxonomyCategory::ContactDatabase}] = unknown();
    m.cells[{AppId::whatsapp, TaxonomyCategory::ContactDatabase}] = none();

    return m;
}

RecoverabilityMatrix make_android_logical() {
    RecoverabilityMatrix m;
    fill_unknown(m);  // no installation row in this baseline -> unknown

    // Viber and Tango columns are N/A throughout: nothing recoverable via
    // logical extraction.

    // Traffic: Skype "Call/Chat history", Viber N/A, Tango N/A,
    // WhatsApp "Chat history"
    m.cells[{AppId::skype, TaxonomyCategory::TrafficData}] = tagged({Tag::calls, Tag::chats});
    m.cells[{AppId::viber, TaxonomyCategory::TrafficData}] = none();
    m.cells[{AppId::tango, TaxonomyCategory::TrafficData}] = none();
    m.cells[{AppId::whatsapp, TaxonomyCategory::TrafficData}] = tagged({Tag::chats});

    // Content: Skype "Chat/Image/Video", WhatsApp "Chat/Image"
    m.cells[{AppId::skype, TaxonomyCategory::ContentData}] =
        tagged({Tag::text, Tag::image, Tag::video});
    m.cells[{AppId::viber, TaxonomyCategory::ContentData}] = none();
    m.cells[{AppId::tango, TaxonomyCategory::ContentData}] = none();
    m.cells[{AppId::whatsapp, TaxonomyCategory::ContentData}] = tagged({Tag::text, Tag::image});

    // User profile: Yes / N/A / N/A / No
    m.cells[{AppId::skype, TaxonomyCategory::UserProfileData}] = yes();
    m.cells[{AppId::viber, TaxonomyCategory::UserProfileData}] = none();
    m.cells[{AppId::tango, TaxonomyCategory::UserProfileData}] = none();
    m.cells[{AppId::whatsapp, TaxonomyCategory::UserProfileData}] = none();

    // Contact database: Yes / N/A / N/A / No
    m.cells[{AppId::skype, TaxonomyCategory::ContactDatabase}] = yes();
    m.cells[{AppId::viber, TaxonomyCategory::ContactDatabase}] = none();
    m.cells[{AppId::tango, TaxonomyCategory::ContactDatabase}] = none();
    m.cells[{AppId::whatsapp, TaxonomyCategory::ContactDatabase}] = none();

    return m;
}

}  // namespace

const RecoverabilityMatrix& reference_ios_filesystem() {
    static const RecoverabilityMatrix m = make_ios_filesystem();
    return m;
}

const RecoverabilityMatrix& reference_android_logical() {
    static const RecoverabilityMatrix m = make_android_logical();
    return m;
}

}  // namespace imtriage::report
