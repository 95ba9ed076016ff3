"""Regenerate the bundled 20-scenario task dataset.

Each entry is authored for this repo (marked provenance: reconstructed) with a
six-item checklist following the dataset schema in stacktalk.model.
"""

from __future__ import annotations

import json
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "src" / "stacktalk" / "data" / "tasks"

def items(*titles_and_descs):
    return [
        {"item_id": f"q{i+1}", "title": t, "description": d}
        for i, (t, d) in enumerate(titles_and_descs)
    ]

TASKS = [
    {
        "task_id": "clinical",
        "scenario": "clinical",
        "system_role": "You are a clinician conducting an initial consultation with a patient.",
        "goal": "Collect the patient's intake information through the checklist and give preliminary advice with a closing summary.",
        "checklist": items(
            ("Basic information", "Patient's age, sex, and relevant personal background."),
            ("Chief complaint", "The main problem that brought the patient in today."),
            ("Duration of symptoms", "When the symptoms started and how they have evolved."),
            ("Severity of symptoms", "How intense the symptoms are and how they affect daily life."),
            ("Medical history", "Prior conditions, medications, and allergies."),
            ("Lifestyle factors", "Sleep, diet, exercise, and recent exposures or travel."),
        ),
        "knowledge": [
            "Advice given in this consultation is preliminary and not a diagnosis.",
            "Patients with severe or rapidly worsening symptoms should be referred to urgent care.",
        ],
    },
    {
        "task_id": "restaurant",
        "scenario": "restaurant",
        "system_role": "You are a restaurant host taking a table reservation.",
        "goal": "Book a table that fits the guest's needs and confirm the reservation details.",
        "checklist": items(
            ("Party size", "How many people the reservation is for."),
            ("Date and time", "Preferred day and seating time."),
            ("Seating preference", "Indoor, outdoor, bar, or private room."),
            ("Dietary requirements", "Allergies or dietary restrictions in the party."),
            ("Special occasion", "Birthdays or celebrations needing arrangements."),
            ("Contact details", "Name and phone number for the booking."),
        ),
    },
    {
        "task_id": "hotel",
        "scenario": "hotel",
        "system_role": "You are a hotel receptionist handling a room booking.",
        "goal": "Reserve a room matching the guest's stay and confirm the booking.",
        "checklist": items(
            ("Stay dates", "Check-in and check-out dates."),
            ("Guests and rooms", "Number of guests and rooms needed."),
            ("Room type", "Preferred room category and bed configuration."),
            ("Budget", "Nightly price range the guest is comfortable with."),
            ("Amenities", "Required amenities such as parking, breakfast, or wifi."),
            ("Guest details", "Name and contact information for the reservation."),
        ),
    },
    {
        "task_id": "hospital",
        "scenario": "hospital",
        "system_role": "You are a hospital appointment coordinator.",
        "goal": "Schedule the caller with the right department and confirm the appointment.",
        "checklist": items(
            ("Reason for visit", "The medical concern prompting the appointment."),
            ("Department", "Which specialty or department fits the concern."),
            ("Urgency", "How soon the patient needs to be seen."),
            ("Insurance", "Coverage and referral status."),
            ("Availability", "Days and times the patient can attend."),
            ("Patient details", "Name, date of birth, and contact information."),
        ),
    },
    {
        "task_id": "train",
        "scenario": "train",
        "system_role": "You are a railway ticket agent helping a traveler.",
        "goal": "Find a suitable train and sell the traveler the right ticket.",
        "checklist": items(
            ("Origin and destination", "Departure and arrival stations."),
            ("Travel date", "Date and preferred departure window."),
            ("Passengers", "Number of travelers and any concession fares."),
            ("Class and seating", "Travel class and seating preference."),
            ("Ticket flexibility", "Refundable or fixed ticket needs."),
            ("Payment and delivery", "Payment method and ticket delivery choice."),
        ),
    },
    {
        "task_id": "police",
        "scenario": "police",
        "system_role": "You are a police desk officer taking an incident report.",
        "goal": "Record a complete incident report and explain next steps to the reporter.",
        "checklist": items(
            ("Incident type", "What kind of incident is being reported."),
            ("Time and place", "When and where the incident occurred."),
            ("Parties involved", "People involved, including descriptions of suspects."),
            ("What happened", "A chronological account of the event."),
            ("Evidence", "Witnesses, photos, recordings, or stolen item details."),
            ("Reporter details", "Reporter's name and contact information."),
        ),
    },
    {
        "task_id": "bus",
        "scenario": "bus",
        "system_role": "You are a bus company agent planning a trip for a rider.",
        "goal": "Plan the rider's bus journey and confirm the itinerary and fare.",
        "checklist": items(
            ("Origin and destination", "Where the rider starts and where they are going."),
            ("Travel time", "Date and preferred departure time."),
            ("Passengers", "Number of riders and eligibility for discounts."),
            ("Route options", "Direct routes versus transfers."),
            ("Accessibility", "Mobility needs, luggage, strollers, or bikes."),
            ("Fare and payment", "Fare type and how the rider will pay."),
        ),
    },
    {
        "task_id": "attraction",
        "scenario": "attraction",
        "system_role": "You are a tourist information agent recommending attractions.",
        "goal": "Recommend an attraction matching the visitor's interests and arrange the visit details.",
        "checklist": items(
            ("Interests", "What kinds of attractions the visitor enjoys."),
            ("Visit timing", "Day and time window for the visit."),
            ("Group", "Who is visiting, including children or seniors."),
            ("Budget", "Spending range for tickets."),
            ("Location constraints", "Area of town and transport available."),
            ("Booking", "Ticket purchase and confirmation details."),
        ),
    },
    {
        "task_id": "airport",
        "scenario": "airport",
        "system_role": "You are an airline service agent at an airport help desk.",
        "goal": "Resolve the traveler's flight issue and confirm their onward plan.",
        "checklist": items(
            ("Flight details", "Flight number, date, and route."),
            ("Issue", "What went wrong: delay, cancellation, missed connection."),
            ("Traveler status", "Ticket class, loyalty status, and checked bags."),
            ("Rebooking preferences", "Acceptable alternative flights and routes."),
            ("Compensation", "Meal vouchers, hotel, or refund eligibility."),
            ("Confirmation", "Final itinerary and traveler contact details."),
        ),
    },
    {
        "task_id": "bar",
        "scenario": "bar",
        "system_role": "You are a bar manager planning a private event for a customer.",
        "goal": "Plan a private bar event and confirm the booking.",
        "checklist": items(
            ("Event type", "What the customer is celebrating."),
            ("Date and time", "Preferred date and hours."),
            ("Guest count", "Expected number of guests."),
            ("Drinks package", "Open bar, tab limit, or pay-as-you-go."),
            ("Food and music", "Catering and entertainment preferences."),
            ("Deposit and contact", "Deposit payment and organizer contact details."),
        ),
    },
    {
        "task_id": "library",
        "scenario": "library",
        "system_role": "You are a librarian helping a patron register and find materials.",
        "goal": "Register the patron for a card and locate the materials they need.",
        "checklist": items(
            ("Patron needs", "What the patron is looking for today."),
            ("Membership", "Whether they hold a card; register if not."),
            ("Identification", "Documents needed for registration."),
            ("Materials search", "Specific titles, authors, or subjects."),
            ("Borrowing rules", "Loan limits, durations, and renewals."),
            ("Pickup or hold", "How the patron will collect the materials."),
        ),
    },
    {
        "task_id": "museum",
        "scenario": "museum",
        "system_role": "You are a museum visitor-services agent planning a visit.",
        "goal": "Plan the visitor's museum trip and book the right tickets and tours.",
        "checklist": items(
            ("Visit date", "When the visitor wants to come."),
            ("Group composition", "Adults, children, students, or seniors."),
            ("Exhibitions", "Current exhibitions matching the visitor's interests."),
            ("Guided tour", "Whether a guided tour or audio guide is wanted."),
            ("Accessibility", "Wheelchair access or other accommodations."),
            ("Tickets", "Ticket types, prices, and confirmation."),
        ),
    },
    {
        "task_id": "park",
        "scenario": "park",
        "system_role": "You are a park office coordinator handling facility reservations.",
        "goal": "Reserve the right park facility for the visitor's event and confirm rules.",
        "checklist": items(
            ("Event", "What the visitor wants to hold in the park."),
            ("Date and duration", "Day and hours of the reservation."),
            ("Attendance", "Expected number of attendees."),
            ("Facility", "Picnic area, pavilion, sports field, or open lawn."),
            ("Equipment and rules", "Grills, amplification, alcohol, and permits."),
            ("Reservation details", "Fees, organizer name, and confirmation."),
        ),
    },
    {
        "task_id": "gym",
        "scenario": "gym",
        "system_role": "You are a gym membership advisor onboarding a new member.",
        "goal": "Match the visitor to a membership plan and complete sign-up.",
        "checklist": items(
            ("Fitness goals", "What the visitor wants to achieve."),
            ("Experience", "Training background and current activity level."),
            ("Schedule", "Days and times they plan to train."),
            ("Facilities and classes", "Equipment, classes, or personal training interest."),
            ("Health considerations", "Injuries or conditions affecting training."),
            ("Membership plan", "Plan choice, price, and sign-up details."),
        ),
    },
    {
        "task_id": "cinema",
        "scenario": "cinema",
        "system_role": "You are a cinema box-office agent selling tickets.",
        "goal": "Sell the customer tickets for a showing that fits their preferences.",
        "checklist": items(
            ("Film choice", "Which film or genre the customer wants to see."),
            ("Showtime", "Preferred date and time of the showing."),
            ("Party", "Number of tickets and ages for ratings and discounts."),
            ("Seats", "Seating preference and screen format."),
            ("Extras", "Snacks, drinks, or premium options."),
            ("Payment", "Payment and ticket delivery."),
        ),
    },
    {
        "task_id": "office",
        "scenario": "office",
        "system_role": "You are an office manager provisioning a workspace for a new hire.",
        "goal": "Set up the new hire's workspace and record their requirements.",
        "checklist": items(
            ("Role and team", "The new hire's role and which team they join."),
            ("Start date", "First day and onboarding schedule."),
            ("Desk location", "Preferred floor, desk type, or remote setup."),
            ("Equipment", "Computer, monitors, and peripherals needed."),
            ("Access", "Badges, accounts, and software permissions."),
            ("Confirmation", "Summary of the setup and contact for issues."),
        ),
    },
    {
        "task_id": "barbershop",
        "scenario": "barbershop",
        "system_role": "You are a barbershop receptionist booking an appointment.",
        "goal": "Book the client's appointment with the right barber and service.",
        "checklist": items(
            ("Service", "Haircut, beard trim, coloring, or combination."),
            ("Style preferences", "Desired style and reference details."),
            ("Barber", "Preferred barber or first available."),
            ("Timing", "Preferred day and time."),
            ("Hair condition", "Hair type and any scalp sensitivities."),
            ("Booking details", "Client name, contact, and confirmation."),
        ),
    },
    {
        "task_id": "bakery",
        "scenario": "bakery",
        "system_role": "You are a bakery clerk taking a custom cake order.",
        "goal": "Take a complete custom cake order and confirm pickup.",
        "checklist": items(
            ("Occasion", "What the cake is for."),
            ("Size and servings", "How many people the cake should serve."),
            ("Flavors", "Cake, filling, and frosting flavors."),
            ("Design", "Decoration theme, colors, and inscription."),
            ("Allergies", "Allergens to avoid in the recipe."),
            ("Pickup and payment", "Pickup date, time, and payment."),
        ),
    },
    {
        "task_id": "zoo",
        "scenario": "zoo",
        "system_role": "You are a zoo guest-services agent planning a family visit.",
        "goal": "Plan the family's zoo visit and book tickets and experiences.",
        "checklist": items(
            ("Visit date", "When the family plans to visit."),
            ("Group", "Number of adults and children with ages."),
            ("Animal interests", "Exhibits and animals the family wants to see."),
            ("Experiences", "Feedings, shows, or behind-the-scenes tours."),
            ("Logistics", "Parking, strollers, and food options."),
            ("Tickets", "Ticket types, total price, and confirmation."),
        ),
    },
    {
        "task_id": "bank",
        "scenario": "bank",
        "system_role": "You are a bank advisor helping a customer open an account.",
        "goal": "Open the right account for the customer and complete the application.",
        "checklist": items(
            ("Banking needs", "What the customer wants from the account."),
            ("Account type", "Checking, savings, or joint account options."),
            ("Identification", "Documents required to open the account."),
            ("Initial deposit", "Opening balance and funding source."),
            ("Services", "Cards, online banking, and overdraft preferences."),
            ("Application", "Personal details and application confirmation."),
        ),
    },
]


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for task in TASKS:
        doc = dict(task)
        doc.setdefault("knowledge", [])
        doc["provenance"] = "reconstructed"
        path = OUT / f"{task['task_id']}.json"
        path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {len(TASKS)} task files to {OUT}")


if __name__ == "__main__":
    main()
