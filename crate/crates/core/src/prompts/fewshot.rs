//! Few-shot material and fixed prompt bodies.
//!
//! Texts are stored exactly as they reach the model: no format-string brace
//! escaping, URLs unwrapped. `{openai_api_key}` in the self-invocation
//! snippets is a literal that survives into prompts and generated code.

use crate::matrix::{Dimension, Level};

pub struct ExampleApp {
    pub name: &'static str,
    /// `(dimension, level, text)` for all six cells.
    pub cells: [(Dimension, Level, &'static str); 6],
}

use Dimension::{Approach, Interaction, Person};
use Level::{Grounding, Idea};

pub const MATRIX_EXAMPLES: [ExampleApp; 3] = [
    ExampleApp {
        name: "OKCupid",
        cells: [
            (Person, Idea, "Single person"),
            (Person, Grounding, "- Difficulty in finding potential partners who meet specific criteria like race, religion, age, or occupation.\n- Challenges in efficiently filtering through dating apps to locate compatible matches.\n- Need for an application that streamlines the process by allowing users to set precise criteria and receive curated suggestions."),
            (Approach, Idea, "Searchable Database to allow people to search for people based on specified criteria"),
            (Approach, Grounding, "- Ensure the database includes comprehensive filters such as age, gender, sex, religion, and occupation to meet users' specific search criteria.\n- Develop a robust and scalable search algorithm that efficiently handles large datasets and returns accurate results based on the selected filters.\n- Implement user-friendly search and filtering interfaces that make it easy for users to apply multiple criteria and refine their search results."),
            (Interaction, Idea, "Faceted Browsing"),
            (Interaction, Grounding, "- Provide users with multiple facet filters, including age, gender, religion, occupation, and location, to refine their search effectively.\n- Ensure the UI dynamically updates search results in real-time as users adjust their facet filters, offering immediate feedback.\n- Design intuitive navigation with clear options to reset filters, switch criteria, and save searches, using checkboxes, sliders, and dropdowns for ease of use."),
        ],
    },
    ExampleApp {
        name: "Tinder",
        cells: [
            (Person, Idea, "Single person"),
            (Person, Grounding, "- Users often struggle to find matches that meet their physical preferences quickly and efficiently.\n- The abundance of profiles makes it challenging to identify those that align with specific looks or appearances.\n- A streamlined approach to swiping and filtering by appearance would help users connect with potential matches faster, focusing on visual attraction."),
            (Approach, Idea, "Lower the cognitive load by providing less information, making it easier to judge potential matches quickly"),
            (Approach, Grounding, "- Limit the displayed information to essential details, such as a single profile photo and a brief tagline, to encourage snap judgments.\n- Focus on visual appeal as the primary matching criterion, reducing the need for users to sift through extensive profiles.\n- Use an algorithm to prioritize matches based on visual preferences and minimal data inputs, streamlining the matching process."),
            (Interaction, Idea, "Card Swipe"),
            (Interaction, Grounding, "- Each card should prominently feature a large profile photo, as visual appeal is the primary factor in this interaction.\n- Include minimal text, such as the person\u{2019}s name, age, and a short tagline or fun fact, to provide just enough context without overwhelming the user.\n- Add simple icons or buttons for actions like \"Like\" or \"Pass,\" ensuring that users can quickly swipe or tap to make their choice."),
        ],
    },
    ExampleApp {
        name: "Coffee Meets Bagel",
        cells: [
            (Person, Idea, "Single person"),
            (Person, Grounding, "- Users who are looking for serious relationships prefer fewer, high-quality matches over endless swiping.\n- The overwhelming number of potential matches on other apps can make it difficult to focus on finding a meaningful connection.\n- An app designed for serious dating should streamline the process by offering a curated selection of potential partners, reducing time spent on the app."),
            (Approach, Idea, "Lower the cognitive load by having less matches to make more intentional judgements"),
            (Approach, Grounding, "- Present a select number of potential matches each day to prevent decision fatigue and promote thoughtful consideration.\n- Display key information like shared interests, compatibility indicators, and mutual friends to aid decision-making without overwhelming the user.\n- Prioritize quality over quantity, ensuring that each match is relevant to the user\u{2019}s preferences and relationship goals."),
            (Interaction, Idea, "Feed with 5 options to date"),
            (Interaction, Grounding, "- The daily message should include a concise profile summary for each of the five matches, highlighting essential details such as name, age, occupation, and a short personal note or shared interest.\n- Include compatibility scores or commonalities (e.g., mutual friends, hobbies) to help users quickly assess each match\u{2019}s potential.\n- Provide clear action buttons within the message to either like, pass, or start a conversation, making it easy for users to engage with their daily options."),
        ],
    },
];

pub const SPEC_EXAMPLES: [(&str, &str); 3] = [
    ("Music Recommendation App", r#"Application Layout:
- Create a clean, simple interface divided into two main sections: "Discover" and "Favorites."
- The "Discover" section would have a large area that changes dynamically to display song details with each swipe (song name, artist, album, genre, and description).
- It would also have 'like', 'dislike' and 'skip' buttons, which will work with simple clicks.
- The 'Favorites' section would be a list of all liked songs.
User Interactions:
- The user can click to swipe a song left (dislike), right (like), or down (skip).
- The user can click on a song to save to favorites once liked.
- The user can navigate between "Discover" and "Favorites" sections via top navigation tabs.
Inputs and Logic:
- The app will use the user's interactions (likes, dislikes, skips) as inputs to an ML model (implemented using GPT) to evolve its music recommendations in real-time.
- On initial use, ask the user for favorite genres, artists, or songs to kickstart the ML algorithm.
- The user's interaction with each song (whether they like, dislike, or skip it) will further tailor the recommendations.
- The saved favorite songs will be stored
- There is no need to create placeholder data for music, as GPT will return the music recommendations."#),
    ("Outfit Generator App", OUTFIT_SPEC),
    ("Plant Watering Tracker", r#"Application Layout:
- Create a clean and intuitive interface with a prominent section for the "Watering Calendar."
- Divide the interface into three main sections: "Watering Calendar," "Plant List," and "Watering Reminders."
- The "Watering Calendar" section should display a monthly calendar view with visual indicators for scheduled watering days.
- The "Plant List" section should allow users to add and manage their plant collection, including details like species, pot size, and watering requirements.
- The "Watering Reminders" section should display upcoming watering tasks and allow users to set notification preferences.
User Interactions:
- Users can click on specific dates in the "Watering Calendar" to schedule or modify watering tasks for individual plants or groups.
- Users can click on plants in the "Plant List" to view or edit their details, including watering schedules.
- Users can set notification preferences (email, push notifications, etc.) for upcoming watering tasks in the "Watering Reminders" section.
Inputs and Logic:
- The app will use the user's initial plant inputs (species, pot size, etc.) to determine baseline watering requirements for each plant.
- An algorithm (implemented using GPT) will analyze factors like plant type, pot size, and environmental conditions (temperature, humidity, etc.) to generate adaptive watering schedules.
- The algorithm will learn from the user's interactions (manually adjusting watering schedules, plant health feedback) to refine its recommendations over time.
- The app will send reminders based on the user's scheduled watering tasks and notification preferences.
- Create placeholder data for the user's current plants."#),
];

pub const OUTFIT_SPEC: &str = r#"Application Layout:
- Create a clean, minimalist interface with a prominent central area for displaying outfit recommendations.
- Divide the interface into three main sections: "Outfit Recommendations," "Wardrobe," and "Saved Outfits."
- The "Outfit Recommendations" section should display swipeable cards with visual representations of the recommended outfits, along with relevant tags (season, occasion, style).
- The "Wardrobe" section should allow users to input their clothing items, categorized by type (tops, bottoms, dresses, etc.).
- The "Saved Outfits" section should display a grid of liked outfits for future reference.
User Interactions:
- Users can swipe left by clicking no, or right by clicking yes on the outfit recommendation cards to dislike or like the outfit, respectively.
- Users can click on individual clothing items in the "Wardrobe" section to add or remove them from their virtual wardrobe.
- Users can click on a liked outfit in the "Saved Outfits" section to view its details or remove it from the saved list.
Inputs and Logic:
- The app will use the user's initial wardrobe inputs and style preferences (gathered through a brief questionnaire) to kickstart the GPT-powered outfit recommendation algorithm.
- The algorithm will consider factors like season, occasion, and the user's wardrobe items to generate outfit recommendations.
- The user's interactions (likes, dislikes) with the recommended outfits will be used as feedback to refine and personalize the algorithm's recommendations over time.
- The liked outfits will be saved in the "Saved Outfits" section for future reference.
- Create placeholder data for the initial wardrobe."#;

/// Placeholder-data system prompt. `{person_idea}` and `{person_grounding}`
/// are template placeholders.
pub const DATA_PROMPT: &str = r#"You are generating fake JSON data for a UI that a user wants to create. The spec should give instructions as to what data needs to be generated.

For example, for this spec:
"Application Layout:
- Create a clean, minimalist interface with a prominent central area for displaying outfit recommendations.
- Divide the interface into three main sections: "Outfit Recommendations," "Wardrobe," and "Saved Outfits."
- The "Outfit Recommendations" section should display swipeable cards with visual representations of the recommended outfits, along with relevant tags (season, occasion, style).
- The "Wardrobe" section should allow users to input their clothing items, categorized by type (tops, bottoms, dresses, etc.).
- The "Saved Outfits" section should display a grid of liked outfits for future reference.
User Interactions:
- Users can swipe left by clicking no, or right by clicking yes on the outfit recommendation cards to dislike or like the outfit, respectively.
- Users can click on individual clothing items in the "Wardrobe" section to add or remove them from their virtual wardrobe.
- Users can click on a liked outfit in the "Saved Outfits" section to view its details or remove it from the saved list.
Inputs and Logic:
- The app will use the user's initial wardrobe inputs and style preferences (gathered through a brief questionnaire) to kickstart the GPT-powered outfit recommendation algorithm.
- The algorithm will consider factors like season, occasion, and the user's wardrobe items to generate outfit recommendations.
- The user's interactions (likes, dislikes) with the recommended outfits will be used as feedback to refine and personalize the algorithm's recommendations over time.
- The liked outfits will be saved in the "Saved Outfits" section for future reference.
- Create placeholder data for initial wardrobe."
we only want to generate fake data for the INITIAL wardrobe, not the outfit recommendations.

Also, consider the user in this situation, and generate data tailored to the user if necessary. The application is for {person_idea}, with these details: {person_grounding}

Please generate a JSON array of fake data with appropriate fields. Here is an example:

Input: I want to create a UI that visualizes a beauty store's inventory... It should have the fields `title`, `description`, `price`, `discountPercentage`, `rating`, `stock`, `brand`, `category`

System result:
[
    {
        "id": 11,
        "title": "perfume Oil",
        "description": "Mega Discount",
        "price": 13,
        "discountPercentage": 8.4,
        "rating": 4.26,
        "stock": 65,
        "brand": "Impression of Acqua Di Gio",
        "category": "fragrances",
    },
    {
        "id": 12,
        "title": "perfume Oil",
        "description": "Half Off",
        "price": 15,
        "discountPercentage": 12.3,
        "rating": 3.46,
        "stock": 2343,
        "brand": "Victoria Secret",
        "category": "fragrances",
    },
]
Please follow these rules while creating the JSON array
1. Please only return the JSON array and nothing else.
2. Array length should be length 10-20.
3. Please ensure that the generated data makes sense."#;

pub const PLAN_EXAMPLE: &str = r#"Spec
Application Layout
- Create a clean, minimalist interface with a prominent central area for displaying outfit recommendations.
- Divide the interface into three main sections: "Outfit Recommendations," "Wardrobe," and "Saved Outfits."
- The "Outfit Recommendations" section should display swipeable cards with visual representations of the recommended outfits, along with relevant tags (season, occasion, style).
- The "Wardrobe" section should allow users to input their clothing items, categorized by type (tops, bottoms, dresses, etc.).
- The "Saved Outfits" section should display a grid of liked outfits for future reference.
User Interactions:
- Users can swipe left by clicking no, or right by clicking yes on the outfit recommendation cards to dislike or like the outfit, respectively.
- Users can click on individual clothing items in the "Wardrobe" section to add or remove them from their virtual wardrobe.
- Users can click on a liked outfit in the "Saved Outfits" section to view its details or remove it from the saved list.
Inputs and Logic:
- The app will use the user's initial wardrobe inputs and style preferences (gathered through a brief questionnaire) to kickstart the GPT-powered outfit recommendation algorithm.
- The algorithm will consider factors like season, occasion, and the user's wardrobe items to generate outfit recommendations.
- The user's interactions (likes, dislikes) with the recommended outfits will be used as feedback to refine and personalize the algorithm's recommendations over time.
- The liked outfits will be saved in the "Saved Outfits" section for future reference.
- Create placeholder data for the initial wardrobe.

Plan
1. Set up the React application and create the main layout with the three sections: 'Outfit Recommendations', 'Wardrobe', and 'Saved Outfits'. Read in the placeholder data from the endpoint.
2. Implement the 'Outfit Recommendations' section with swipeable cards using MUI components. Create placeholder data for initial outfit recommendations.
3. Implement the 'Wardrobe' section with a list of clothing items categorized by type (tops, bottoms, dresses, etc.). Allow users to add or remove items from their virtual wardrobe.
4. Implement the 'Saved Outfits' section with a grid layout to display liked outfits. Allow users to view outfit details or remove outfits from the saved list.
5. Integrate GPT to generate outfit recommendations based on the user's wardrobe and style preferences. Implement the logic to handle user interactions (likes, dislikes) and refine the recommendations accordingly."#;

/// The reference single-file React + MUI document.
pub const APP_SKELETON: &str = r#"<!DOCTYPE html>
<html lang="en">
<head>
  <meta charset="UTF-8">
  <meta name="viewport" content="width=device-width, initial-scale=1.0">
  <title>React App with MUI and Hooks</title>
  <!-- Load React and ReactDOM from CDN -->
  <script src="https://unpkg.com/react@18/umd/react.development.js" crossorigin></script>
  <script src="https://unpkg.com/react-dom@18/umd/react-dom.development.js" crossorigin></script>
  <!-- Babel for JSX transformation -->
  <script src="https://unpkg.com/@babel/standalone/babel.min.js"></script>
  <!-- Load MUI from CDN -->
  <link rel="stylesheet" href="https://fonts.googleapis.com/css?family=Roboto:300,400,500,700&display=swap" />
  <script src="https://unpkg.com/@mui/material@5.0.0-rc.1/umd/material-ui.development.js" crossorigin></script>
</head>
<body>
  <div id="root"></div>
  <script type="text/babel">
    const {
      Button,
      Container,
      Typography,
      TextField,
    } = MaterialUI;

    const { useState, useEffect } = React;

    function App() {
      const [count, setCount] = useState(0);
      const [name, setName] = useState('');

      useEffect(() => {
        document.title = `Count: ${count}`;
      }, [count]);

      return (
        <Container>
          <Typography variant="h2" component="h1" gutterBottom>
            Hello, React with Material-UI and Hooks!
          </Typography>
          <Typography variant="h5">
            Count: {count}
          </Typography>
          <Button variant="contained" color="primary" onClick={() => setCount(count + 1)}>
            Increment
          </Button>
          <TextField
            label="Name"
            value={name}
            onChange={(e) => setName(e.target.value)}
            variant="outlined"
            margin="normal"
            fullWidth
          />
          <Typography variant="h6">
            Name: {name}
          </Typography>
        </Container>
      );
    }

    const rootElement = document.getElementById('root');
    const root = ReactDOM.createRoot(rootElement);
    root.render(<App />);
  </script>
</body>
</html>
"#;

pub const CODE_RULES_PREAMBLE: &str = "The entire app will be in one index.html file. It will be written entirely in HTML, Javascript, and CSS. The design should not incorporate routes. Everything should exist within one page. No need for design mockups, wireframes, or external dependencies.\nThe entire app will be written using React and MUI. Load MUI from the CDN. Here is an example:";

pub const CODE_RULES_RETENTION: &str = "- DO NOT DELETE PREVIOUS CODE. DO NOT RETURN A CODE SNIPPET. RETURN THE ENTIRE CODE. Only ADD to existing code to implement the task properly. DO NOT COMMENT PARTS OF THE CODE OUT AND WRITE /*...rest of the code */ or something similar. DO NOT COMMENT ANY PARTS OF THE CODE OUT. DO NOT COMMENT ANY PARTS OF THE CODE OUT FROM PREVIOUS CODES.\n- DO NOT COMMENT {/* Other sections remain the same */}. ALL THE CODE MUST EXIST. ALL YOU ARE DOING IS ADDING FUNCTIONALITY. ADDING FUNCTIONALITY - DO NOT REMOVE ANY PREVIOUS CODE.";

pub const CODE_RULES_CDN: &str = "- DO NOT LOAD ANYTHING ELSE IN THE CDN. Specifically, DO NOT USE: MaterialUI Icon, Material UI Lab.\n- Do not return separate code files. All the components should be in one code file and returned.\n- Do not type import statements. Assume that MUI and react are already imported libraries, so to use the components simply do so like this: const {Button, Container, Typography, TextField } = MaterialUI; or const { useState, useEffect } = React;";

pub const UPSTREAM_CHAT_URL: &str = "https://api.openai.com/v1/chat/completions";
pub const UPSTREAM_IMAGES_URL: &str = "https://api.openai.com/v1/images/generations";

pub const SELF_INVOKE_TEXT_EXAMPLE: &str = r#"try {
 const response = await fetch('https://api.openai.com/v1/chat/completions', {
   method: 'POST',
   headers: {
     'Content-Type': 'application/json',
     'Authorization': `Bearer {openai_api_key}`
   },
   body: JSON.stringify({
     model: 'gpt-4',
     messages: [
       {
         role: 'system',
         content: 'You are a helpful assistant providing clothing recommendations based on user preferences.'
       },
       {
         role: 'user',
         content: `
         Based on the following preferences, provide a list of recommended clothing items in the following JSON format:
         [
           {
             "id": 6,
             "itemName": "Striped T-Shirt",
             "description": "A classic striped t-shirt made of 100% cotton.",
             "imageUrl": "https://example.com/striped-tshirt.jpg",
             "size": "M",
             "brand": "H&M",
             "price": 19.99
           },
           ...
         ]

         Preferences: XYX

         Ensure the JSON is valid and adheres strictly to this format. Do not type any additional text, only provide the JSON.`
       }
     ]
   })
 });


 const result = await response.json();
 const parsedData = JSON.parse(result.choices[0].message.content);
 setRecommendations(parsedData);
} catch (err) {
 setError(err.message);
} finally {
 setLoading(false);
}"#;

pub const SELF_INVOKE_IMAGE_EXAMPLE: &str = r#"try:
   response = await fetch('https://api.openai.com/v1/chat/completions', {
       'method': 'POST',
       'headers': {
           'Content-Type': 'application/json',
           'Authorization': 'Bearer {openai_api_key}'
       },
       'body': json.dumps({
           'model': 'gpt-4',
           'messages': [
               {
                   'role': 'system',
                   'content': 'You are a helpful assistant providing grocery recommendations based on dietary preferences and restrictions.'
               },
               {
                   'role': 'user',
                   'content': """
                   Based on the following dietary preferences and restrictions, provide a list of recommended grocery items in the following JSON format:
                   [
                       {
                           "name": "Organic Quinoa",
                           "description": "A gluten-free, high-protein grain.",
                           "category": "Grains",
                           "nutritionalInfo": {
                               "calories": 120,
                               "fat": 2.1,
                               "protein": 4.4,
                               "carbs": 21.3
                           },
                           "compatibility": "Vegan, Gluten-Free, Vegetarian"
                       },
                       ...
                   ]


                   Preferences and Restrictions: {preferences}


                   Ensure the JSON is valid and adheres strictly to this format. Do not type any additional text, only provide the JSON.
                   """
               }
           ]
       })
   })


   result = await response.json()
   parsed_data = json.loads(result['choices'][0]['message']['content'])


   # Fetch images for each recommendation
   for item in parsed_data:
       image_response = await fetch('https://api.openai.com/v1/images/generations', {
           'method': 'POST',
           'headers': {
               'Content-Type': 'application/json',
               'Authorization': 'Bearer {openai_api_key}'
           },
           'body': json.dumps({
               'prompt': f"An image of {item['name']}, a {item['category']} item.",
               'n': 1,
               'size': "256x256"
           })
       })


       image_result = await image_response.json()
       item['imageUrl'] = image_result['data'][0]['url']


   set_recommendations(parsed_data)


except Exception as err:
   print(err)
   set_error(str(err))


finally:
   set_loading(False)"#;

pub const CHART_LIBRARY_EXAMPLE: &str = r#"Charts may be drawn with Chart.js. It is the one additional CDN script allowed; add this tag to the head:
<script src="https://cdn.jsdelivr.net/npm/chart.js@4.4.0/dist/chart.umd.min.js"></script>
Example component:
function ProgressChart({ points }) {
  const canvasRef = React.useRef(null);
  React.useEffect(() => {
    const chart = new Chart(canvasRef.current, {
      type: 'line',
      data: {
        labels: points.map((p) => p.label),
        datasets: [{ label: 'Score', data: points.map((p) => p.value) }],
      },
      options: { responsive: true },
    });
    return () => chart.destroy();
  }, [points]);
  return <canvas ref={canvasRef}></canvas>;
}"#;

pub const DIAGRAM_LIBRARY_EXAMPLE: &str = r#"Diagrams (flow charts, mind maps, process diagrams) may be drawn with GoJS. It is the one additional CDN script allowed; add this tag to the head:
<script src="https://unpkg.com/gojs@3.0.0/release/go.js"></script>
Example component:
function MindMap({ nodes, links }) {
  const divRef = React.useRef(null);
  React.useEffect(() => {
    const $ = go.GraphObject.make;
    const diagram = $(go.Diagram, divRef.current, { layout: $(go.TreeLayout) });
    diagram.nodeTemplate = $(go.Node, 'Auto',
      $(go.Shape, 'RoundedRectangle', { fill: 'white' }),
      $(go.TextBlock, { margin: 8 }, new go.Binding('text', 'label')));
    diagram.model = new go.GraphLinksModel(nodes, links);
    return () => { diagram.div = null; };
  }, [nodes, links]);
  return <div ref={divRef} style={{ width: '100%', height: 400 }}></div>;
}"#;

/// Debug-iteration prompt, system half.
pub const DEBUG_SYSTEM: &str = "A coding task has been implemented for a project we are working on. For context, this is the project description: {spec}. The task was this: {task}. This is the faked_data: {faked_data}. However, the task was not implemented fully correctly. The user explains what is wrong in the problem {problem}. There is already existing code in the index.html file. Using the existing code {task_code}. Please fix the problem.\nPLEASE DO NOT DELETE EXISTING CODE. ONLY FIX THE BUG.\nReturn the FULL CODE NEEDED TO HAVE THE APP WORK, INSIDE THE INDEX.HTML file.";

/// Debug-iteration prompt, user half.
pub const DEBUG_USER: &str = "Please fix the problem that the user describes: {problem}";
