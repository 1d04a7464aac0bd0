//! The "learn Chinese" walkthrough: canned model answers, the cumulative
//! documents for each plan step, and a driver that runs the whole pipeline.
//! Shared by the fixture recorder example and the tests.

#![allow(dead_code)]

use std::collections::VecDeque;
use std::sync::{Arc, Mutex};

use workbench_core::gateway::{CompletionResult, GatewayError, PromptRequest, Provider};
use workbench_core::matrix::{CellKey, Dimension};
use workbench_core::prompts::endpoints::{SelfInvokeMode, DATA_URL, KEY_PLACEHOLDER, PROXY_IMAGES_URL};
use workbench_core::prompts::fewshot::UPSTREAM_IMAGES_URL;
use workbench_core::{Engine, Project, Result};

pub const PROBLEM: &str = "learn Chinese";

pub const PERSON_IDEAS_1: [&str; 3] = [
    "Non-native speakers interested in Chinese culture",
    "Visual learners struggling with language memorization",
    "Travel enthusiasts planning a trip to China",
];
pub const PERSON_IDEAS_2: [&str; 3] = [
    "Retired adult wanting to expand linguistic skills",
    "Busy university student wanting to study Chinese in his free time",
    "Travel enthusiasts planning a trip to China",
];
pub const PERSON_GROUNDING: [&str; 3] = [
    "Confusion arises due to unfamiliarity with Chinese characters and their complex structure, slowing the learning process.",
    "Difficulty in linking characters to their corresponding meaning or pronunciation, hindering vocabulary acquisition.",
    "Traditional memorization methods offer little aid to visual learners who could better recall information through imagery.",
];
pub const APPROACH_IDEAS: [&str; 3] = [
    "Pictorial spaced repetition learning",
    "Visual storytelling for language acquisition",
    "Cognitive load theory for efficient memorization",
];
pub const APPROACH_GROUNDING_SRS: [&str; 4] = [
    "Implement the spaced repetition system (SRS) algorithm to schedule review times according to each user’s progress, allowing items to reappear before they’re likely to be forgotten.",
    "Incorporate visual  images representing Chinese characters or words, enhancing the memory association between visual cues and corresponding meanings.",
    "Integrate regular reviews into the learning process, which are fine-tuned according to the user’s performance, to further solidify memory and retention.",
    "Leverage cognitive science principles such as interleaving (mixing similar tasks) and retrieval practice (recalling an item from memory), to increase learning effectiveness.",
];
pub const APPROACH_GROUNDING_STORY: [&str; 4] = [
    "Integrate visual aids, such as illustrations or animations, that correlate with each word’s meaning to enhance understanding and recall.",
    "Develop an algorithm that links related words and images together in a meaningful story, promoting stronger memory associations.",
    "Make use of GPT to generate context-rich sentences or mini-stories, helping to create a narrative around each word or character.",
    "Ensure design of the learning material caters to visual learners with a focus on vibrant, engaging, and contextually relevant graphical representations.",
];
pub const INTERACTION_IDEAS: [&str; 3] = [
    "Simple guess-and-review quiz interface",
    "Visual dictionary flashcard interface",
    "Image-based language learning game interface",
];
pub const INTERACTION_GROUNDING: [&str; 4] = [
    "The quiz interface should present the Chinese character or word along with its corresponding image.",
    "The user then attempts to guess its meaning. If they respond accurately, the item is pushed back into the review cycle based on the SRS algorithm.",
    "If the guess is incorrect, the correct meaning is displayed, and the item is scheduled for another review sooner.",
    "Users should have a clear view of their progress and a way to navigate to previously learned words for self-study.",
];

pub const REQUIREMENTS_ANSWER: &str =
    "Based on the design matrix, the prototype needs:\n[\"Dynamically generated AI-images\", \"Pre-generated data\"]";

pub const USAGE_SPEC: &str = r#"Application Layout:
- Divide the interface into three main sections: "Flashcards," "Quiz," and "Progress."
- The "Flashcards" section displays the Chinese character/word along with its corresponding image for visual association.
- The "Quiz" section presents the character/word and image, prompting the user to input the meaning.
- The "Progress" section shows the user's performance metrics, such as accuracy rate and words mastered.

User Interactions:
- In the "Flashcards" section, users can click through the flashcards to study the character/word and its associated image.
- In the "Quiz" section, users can type in their answer for the displayed character/word and image.
- Users can click a "Show Answer" button to reveal the correct meaning if they are unsure.
- Users can navigate between the "Flashcards," "Quiz," and "Progress" sections using tabs or buttons.

Inputs and Logic:
- The app will use a pre-generated dataset of Chinese characters/words, their meanings, and associated images.
- The spaced repetition system (SRS) algorithm will determine the optimal interval for reviewing each character/word based on the user's performance.
- Correctly answered items in the "Quiz" section will have their review interval increased (pushed further back in the review cycle).
- Incorrectly answered items will have their review interval decreased (scheduled for more frequent review).
- The app will track the user's progress, such as the number of words mastered and accuracy rates, and display this information in the "Progress" section.
- Incorporate cognitive science principles like interleaving (mixing different types of content) and retrieval practice (actively recalling information) into the "Quiz" section to enhance learning effectiveness.

By combining visual associations with images, spaced repetition, and interactive quizzes, this UI aims to provide an engaging and effective way for non-Chinese speaking students to learn and retain Chinese characters and vocabulary.
"#;

/// (id, chinese, meaning, imagePath)
pub const USAGE_ITEMS: [(u32, &str, &str, &str); 15] = [
    (1, "我学习中文", "I study Chinese", "images/studying.jpg"),
    (2, "你好吗?", "How are you?", "images/greeting.jpg"),
    (3, "这是一本书", "This is a book", "images/book.jpg"),
    (4, "我喜欢吃苹果", "I like to eat apples", "images/apple.jpg"),
    (5, "今天天气很好", "The weather is nice today", "images/sunny.jpg"),
    (6, "我们去公园吧", "Let's go to the park", "images/park.jpg"),
    (7, "这个房间很大", "This room is big", "images/room.jpg"),
    (8, "我喜欢听音乐", "I like to listen to music", "images/music.jpg"),
    (9, "我们去看电影吧", "Let's go watch a movie", "images/movie.jpg"),
    (10, "我想买一件新衣服", "I want to buy a new piece of clothing", "images/shopping.jpg"),
    (11, "我们去吃晚饭吧", "Let's go eat dinner", "images/dinner.jpg"),
    (12, "这个城市很繁华", "This city is bustling", "images/city.jpg"),
    (13, "我喜欢旅游", "I like to travel", "images/travel.jpg"),
    (14, "我们去运动吧", "Let's go exercise", "images/exercise.jpg"),
    (15, "这个项目很有趣", "This project is interesting", "images/project.jpg"),
];

pub fn usage_data_json() -> String {
    let items: Vec<String> = USAGE_ITEMS
        .iter()
        .map(|(id, zh, en, img)| {
            format!(
                "  {{\n    \"id\": {id},\n    \"chinese\": \"{zh}\",\n    \"meaning\": \"{en}\",\n    \"imagePath\": \"{img}\"\n  }}"
            )
        })
        .collect();
    format!("[\n{}\n]", items.join(",\n"))
}

pub const PLAN_STEPS: [&str; 5] = [
    "Set up the React application and create the main layout with the three sections: 'Flashcards', 'Quiz', and 'Progress'. Read in the pre-generated dataset of Chinese characters/words, their meanings, and associated images from the data endpoint.",
    "Implement the 'Flashcards' section with a display for the Chinese character/word and its corresponding image. Allow users to click through the flashcards.",
    "Implement the 'Quiz' section with a display for the Chinese character/word and its associated image. Allow users to input their answer and reveal the correct meaning. Integrate the spaced repetition system (SRS) algorithm to determine the optimal review interval for each character/word based on the user's performance.",
    "Implement the 'Progress' section to display the user's performance metrics, such as accuracy rate and words mastered. Incorporate cognitive science principles like interleaving and retrieval practice into the 'Quiz' section.",
    "Call GPT to generate images for the Chinese characters/words and associate them with the corresponding entries in the dataset. Display these images in the 'Flashcards' and 'Quiz' sections.",
];

pub const ITERATE_PROBLEM: &str =
    "After I click submit, it moves on to the next question but also shows the answer of the next question.";

fn json_list(items: &[&str]) -> String {
    serde_json::to_string_pretty(items).unwrap()
}

fn grounding_answer(bullets: &[&str]) -> String {
    format!("```json\n{}\n```", serde_json::to_string_pretty(&[bullets]).unwrap())
}

// ---- prototype documents

const HEAD: &str = r#"<!DOCTYPE html>
<html lang="en">
<head>
  <meta charset="UTF-8">
  <meta name="viewport" content="width=device-width, initial-scale=1.0">
  <title>Chinese Flashcards</title>
  <script src="https://unpkg.com/react@18/umd/react.development.js" crossorigin></script>
  <script src="https://unpkg.com/react-dom@18/umd/react-dom.development.js" crossorigin></script>
  <script src="https://unpkg.com/@babel/standalone/babel.min.js"></script>
  <link rel="stylesheet" href="https://fonts.googleapis.com/css?family=Roboto:300,400,500,700&display=swap" />
  <script src="https://unpkg.com/@mui/material@5.0.0-rc.1/umd/material-ui.development.js" crossorigin></script>
</head>
<body>
  <div id="root"></div>
  <script type="text/babel">
    const {
      Box,
      Button,
      Card,
      CardContent,
      CardMedia,
      Container,
      Grid,
      LinearProgress,
      Tab,
      Tabs,
      TextField,
      Typography,
    } = MaterialUI;

    const { useState, useEffect } = React;
"#;

const TAIL: &str = r#"
    ReactDOM.createRoot(document.getElementById('root')).render(<App />);
  </script>
</body>
</html>
"#;

fn image_helper(mode: SelfInvokeMode) -> String {
    let (url, auth) = match mode {
        SelfInvokeMode::Proxy => (PROXY_IMAGES_URL.to_string(), String::new()),
        SelfInvokeMode::InjectKey => (
            UPSTREAM_IMAGES_URL.to_string(),
            format!("\n            'Authorization': 'Bearer {KEY_PLACEHOLDER}',"),
        ),
    };
    format!(
        r#"
    async function generateImage(prompt) {{
      try {{
        const response = await fetch('{url}', {{
          method: 'POST',
          headers: {{
            'Content-Type': 'application/json',{auth}
          }},
          body: JSON.stringify({{ model: 'dall-e-2', prompt: prompt, n: 1, size: '256x256' }}),
        }});
        const data = await response.json();
        return data.data[0].url;
      }} catch (error) {{
        console.error('Error generating image:', error);
        return null;
      }}
    }}
"#
    )
}

const FLASHCARD_GRID: &str = r#"
    function FlashcardGrid({ items }) {
      return (
        <Grid container spacing={2}>
          {items.map((item) => (
            <Grid item xs={12} sm={6} md={4} key={item.id}>
              <Card>
                <CardContent>
                  <Typography variant="h5">{item.chinese}</Typography>
                  <Typography color="text.secondary">{item.meaning}</Typography>
                </CardContent>
              </Card>
            </Grid>
          ))}
        </Grid>
      );
    }
"#;

const FLASHCARD_VIEWER: &str = r#"
    function FlashcardViewer({ items, images }) {
      const [index, setIndex] = useState(0);
      const [revealed, setRevealed] = useState(false);
      if (items.length === 0) {
        return <Typography>Loading phrases...</Typography>;
      }
      const item = items[index];
      const move = (delta) => {
        setRevealed(false);
        setIndex((index + delta + items.length) % items.length);
      };
      return (
        <Box sx={{ textAlign: 'center', mt: 2 }}>
          <Card sx={{ maxWidth: 420, mx: 'auto' }}>
            {images[item.id] && <CardMedia component="img" height="220" image={images[item.id]} alt={item.meaning} />}
            <CardContent>
              <Typography variant="h3">{item.chinese}</Typography>
              {revealed && <Typography variant="h6" color="text.secondary">{item.meaning}</Typography>}
            </CardContent>
          </Card>
          <Box sx={{ mt: 2 }}>
            <Button onClick={() => move(-1)}>Previous</Button>
            <Button variant="outlined" onClick={() => setRevealed(!revealed)}>Flip</Button>
            <Button onClick={() => move(1)}>Next</Button>
          </Box>
          <Typography variant="caption">Card {index + 1} of {items.length}</Typography>
        </Box>
      );
    }
"#;

/// Review queue ordered by due turn; correct answers double the interval,
/// wrong ones reset it to 1.
const SRS: &str = r#"
    function nextReview(card, correct, turn) {
      const interval = correct ? Math.max(2, card.interval * 2) : 1;
      return { ...card, interval: interval, due: turn + interval };
    }

    function pickNext(schedule, turn, lastId) {
      const due = schedule.filter((c) => c.due <= turn && c.id !== lastId);
      const pool = due.length > 0 ? due : schedule.filter((c) => c.id !== lastId);
      return pool.reduce((best, c) => (best === null || c.due < best.due ? c : best), null) || schedule[0];
    }
"#;

fn quiz_section(fixed: bool) -> String {
    let advance = if fixed {
        "        setShowAnswer(false);\n        setFeedback(correct ? 'Correct!' : 'The answer was: ' + current.meaning);\n"
    } else {
        "        setShowAnswer(true);\n        setFeedback(correct ? 'Correct!' : 'Incorrect');\n"
    };
    format!(
        r#"
    function QuizSection({{ items, images, onAnswer }}) {{
      const [schedule, setSchedule] = useState([]);
      const [turn, setTurn] = useState(0);
      const [currentId, setCurrentId] = useState(null);
      const [answer, setAnswer] = useState('');
      const [showAnswer, setShowAnswer] = useState(false);
      const [feedback, setFeedback] = useState('');

      useEffect(() => {{
        const initial = items.map((item) => ({{ id: item.id, interval: 1, due: 0 }}));
        setSchedule(initial);
        if (initial.length > 0) setCurrentId(initial[0].id);
      }}, [items]);

      const current = items.find((item) => item.id === currentId);
      if (!current) {{
        return <Typography>Loading quiz...</Typography>;
      }}

      const handleSubmit = () => {{
        const correct = answer.trim().toLowerCase() === current.meaning.toLowerCase();
        const updated = schedule.map((c) => (c.id === current.id ? nextReview(c, correct, turn) : c));
        const next = pickNext(updated, turn + 1, current.id);
        setSchedule(updated);
        setTurn(turn + 1);
        setCurrentId(next.id);
        setAnswer('');
{advance}        if (onAnswer) onAnswer(current.id, correct);
      }};

      return (
        <Box sx={{{{ textAlign: 'center', mt: 2 }}}}>
          {{images[current.id] && <img src={{images[current.id]}} alt="" style={{{{ maxWidth: 256 }}}} />}}
          <Typography variant="h3">{{current.chinese}}</Typography>
          <TextField label="Meaning" value={{answer}} onChange={{(e) => setAnswer(e.target.value)}} margin="normal" />
          <Box>
            <Button variant="contained" onClick={{handleSubmit}}>Submit</Button>
            <Button onClick={{() => setShowAnswer(true)}}>Show Answer</Button>
          </Box>
          {{showAnswer && <Typography variant="h6">{{current.meaning}}</Typography>}}
          <Typography color="text.secondary">{{feedback}}</Typography>
        </Box>
      );
    }}
"#
    )
}

const PROGRESS_SECTION: &str = r#"
    function ProgressSection({ items, stats }) {
      const attempts = Object.values(stats).reduce((n, s) => n + s.attempts, 0);
      const correct = Object.values(stats).reduce((n, s) => n + s.correct, 0);
      const mastered = items.filter((item) => stats[item.id] && stats[item.id].streak >= 2);
      const accuracy = attempts === 0 ? 0 : Math.round((100 * correct) / attempts);
      return (
        <Box sx={{ mt: 2 }}>
          <Typography variant="h5">Accuracy: {accuracy}%</Typography>
          <LinearProgress variant="determinate" value={accuracy} sx={{ my: 2 }} />
          <Typography variant="h6">Words mastered: {mastered.length} / {items.length}</Typography>
          {mastered.map((item) => (
            <Typography key={item.id}>{item.chinese} - {item.meaning}</Typography>
          ))}
        </Box>
      );
    }
"#;

fn app(k: usize) -> String {
    let mut state = String::from(
        "      const [items, setItems] = useState([]);\n      const [tab, setTab] = useState(0);\n",
    );
    if k >= 2 {
        state.push_str("      const [images, setImages] = useState({});\n");
    }
    if k >= 4 {
        state.push_str("      const [stats, setStats] = useState({});\n");
    }
    let mut effects = format!(
        r#"
      useEffect(() => {{
        fetch('{DATA_URL}')
          .then((response) => response.json())
          .then((data) => setItems(data))
          .catch((error) => console.error('Error loading data:', error));
      }}, []);
"#
    );
    if k >= 5 {
        effects.push_str(
            r#"
      useEffect(() => {
        items.forEach((item) => {
          generateImage('A simple illustration of: ' + item.meaning).then((url) => {
            if (url) setImages((prev) => ({ ...prev, [item.id]: url }));
          });
        });
      }, [items]);
"#,
        );
    }
    if k >= 4 {
        effects.push_str(
            r#"
      const recordAnswer = (id, correct) => {
        setStats((prev) => {
          const s = prev[id] || { attempts: 0, correct: 0, streak: 0 };
          return {
            ...prev,
            [id]: { attempts: s.attempts + 1, correct: s.correct + (correct ? 1 : 0), streak: correct ? s.streak + 1 : 0 },
          };
        });
      };
"#,
        );
    }
    let flashcards = if k >= 2 {
        "<FlashcardViewer items={items} images={images} />\n              <FlashcardGrid items={items} />"
    } else {
        "<FlashcardGrid items={items} />"
    };
    let quiz = match k {
        1 | 2 => "<Typography>The quiz is coming soon.</Typography>",
        3 => "<QuizSection items={items} images={images} />",
        _ => "<QuizSection items={items} images={images} onAnswer={recordAnswer} />",
    };
    let progress = if k >= 4 {
        "<ProgressSection items={items} stats={stats} />"
    } else {
        "<Typography>Progress tracking is coming soon.</Typography>"
    };
    format!(
        r#"
    function App() {{
{state}{effects}
      return (
        <Container>
          <Typography variant="h3" component="h1" gutterBottom>
            Learn Chinese
          </Typography>
          <Tabs value={{tab}} onChange={{(e, value) => setTab(value)}}>
            <Tab label="Flashcards" />
            <Tab label="Quiz" />
            <Tab label="Progress" />
          </Tabs>
          {{tab === 0 && (
            <Box>
              {flashcards}
            </Box>
          )}}
          {{tab === 1 && {quiz}}}
          {{tab === 2 && {progress}}}
        </Container>
      );
    }}
"#
    )
}

/// The full document after step `k` (1-based). `quiz_fixed` selects the
/// corrected quiz for steps 3 and later.
pub fn step_html(k: usize, quiz_fixed: bool, mode: SelfInvokeMode) -> String {
    let mut html = String::from(HEAD);
    if k >= 5 {
        html.push_str(&image_helper(mode));
    }
    html.push_str(FLASHCARD_GRID);
    if k >= 2 {
        html.push_str(FLASHCARD_VIEWER);
    }
    if k >= 3 {
        html.push_str(SRS);
        html.push_str(&quiz_section(quiz_fixed));
    }
    if k >= 4 {
        html.push_str(PROGRESS_SECTION);
    }
    html.push_str(&app(k));
    html.push_str(TAIL);
    html
}

fn code_answer(html: &str) -> String {
    format!("Here is the updated index.html:\n\n```html\n{html}```\n\nThe new section keeps all existing code.")
}

/// Model answers in the order [`run`] asks for them.
pub fn responses(mode: SelfInvokeMode) -> Vec<String> {
    let mut out = vec![
        json_list(&PERSON_IDEAS_1),
        json_list(&PERSON_IDEAS_2),
        grounding_answer(&PERSON_GROUNDING),
        json_list(&APPROACH_IDEAS),
        grounding_answer(&APPROACH_GROUNDING_STORY),
        grounding_answer(&APPROACH_GROUNDING_SRS),
        json_list(&INTERACTION_IDEAS),
        grounding_answer(&INTERACTION_GROUNDING),
        REQUIREMENTS_ANSWER.to_string(),
        format!("Here is the spec for the project:\n\n{USAGE_SPEC}"),
        format!("```json\n{}\n```", usage_data_json()),
        PLAN_STEPS
            .iter()
            .enumerate()
            .map(|(i, s)| format!("{}. {s}", i + 1))
            .collect::<Vec<_>>()
            .join("\n"),
    ];
    out.push(code_answer(&step_html(1, false, mode)));
    out.push(code_answer(&step_html(2, false, mode)));
    out.push(code_answer(&step_html(3, false, mode)));
    out.push(code_answer(&step_html(3, true, mode)));
    out.push(code_answer(&step_html(4, true, mode)));
    out.push(code_answer(&step_html(5, true, mode)));
    out
}

/// Provider answering from a fixed queue regardless of the request.
pub struct Scripted(Mutex<VecDeque<String>>);

impl Scripted {
    pub fn new(answers: Vec<String>) -> Arc<Self> {
        Arc::new(Self(Mutex::new(answers.into())))
    }

    pub fn remaining(&self) -> usize {
        self.0.lock().unwrap().len()
    }
}

impl Provider for Scripted {
    fn complete(&self, req: &PromptRequest) -> std::result::Result<CompletionResult, GatewayError> {
        let text = self
            .0
            .lock()
            .unwrap()
            .pop_front()
            .ok_or_else(|| GatewayError::Provider { status: 0, body: "script exhausted".into() })?;
        Ok(CompletionResult {
            output_tokens: (text.len() / 4) as u64,
            input_tokens: ((req.rendered_system.len() + req.rendered_user.len()) / 4) as u64,
            text,
            provider_model_id: "scripted".into(),
            truncated: false,
        })
    }
}

fn bullets(items: &[&str]) -> String {
    items.iter().map(|b| format!("- {b}")).collect::<Vec<_>>().join("\n")
}

pub fn person_grounding_text() -> String {
    bullets(&PERSON_GROUNDING)
}
pub fn approach_grounding_text() -> String {
    bullets(&APPROACH_GROUNDING_SRS)
}
pub fn interaction_grounding_text() -> String {
    bullets(&INTERACTION_GROUNDING)
}

/// Runs the walkthrough up to (not including) code generation.
pub fn run_scoping(engine: &Engine, p: &mut Project) -> Result<()> {
    use Dimension::*;
    p.matrix.submit_problem(PROBLEM)?;

    engine.brainstorm(p, CellKey::idea(Person), 3)?;
    engine.brainstorm(p, CellKey::idea(Person), 3)?;
    p.matrix.submit_cell(CellKey::idea(Person), PERSON_IDEAS_1[1])?;
    engine.brainstorm(p, CellKey::grounding(Person), 1)?;
    p.matrix.submit_cell(CellKey::grounding(Person), &person_grounding_text())?;

    engine.brainstorm(p, CellKey::idea(Approach), 3)?;
    p.matrix.submit_cell(CellKey::idea(Approach), APPROACH_IDEAS[1])?;
    engine.brainstorm(p, CellKey::grounding(Approach), 1)?;
    let story = bullets(&APPROACH_GROUNDING_STORY);
    p.matrix.submit_cell(CellKey::grounding(Approach), &story)?;
    p.matrix.save_cell_version(CellKey::grounding(Approach))?;
    p.matrix.submit_cell(CellKey::idea(Approach), APPROACH_IDEAS[0])?;
    engine.brainstorm(p, CellKey::grounding(Approach), 1)?;
    p.matrix.submit_cell(CellKey::grounding(Approach), &approach_grounding_text())?;

    engine.brainstorm(p, CellKey::idea(Interaction), 3)?;
    p.matrix.submit_cell(CellKey::idea(Interaction), INTERACTION_IDEAS[0])?;
    engine.brainstorm(p, CellKey::grounding(Interaction), 1)?;
    p.matrix.submit_cell(CellKey::grounding(Interaction), &interaction_grounding_text())?;

    engine.identify_requirements(p)?;
    engine.generate_spec(p)?;
    engine.generate_data(p)?;
    engine.generate_plan(p)?;
    Ok(())
}

/// Generates and approves every step, fixing step 3 through an iterate.
pub fn run_implementation(engine: &Engine, p: &mut Project) -> Result<()> {
    for k in 1..=5 {
        engine.generate_step_code(p, k)?;
        if k == 3 {
            engine.iterate_step(p, 3, ITERATE_PROBLEM)?;
        }
        p.plan_mut()?.approve(k)?;
    }
    Ok(())
}

pub fn run(engine: &Engine, p: &mut Project) -> Result<()> {
    run_scoping(engine, p)?;
    run_implementation(engine, p)
}
